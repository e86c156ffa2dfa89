// Serial reference vs OpenMP kernels on random automata and Cerny series.

#include <random>

#include <benchmark/benchmark.h>

#include "syncgame/constructions.hpp"
#include "syncgame/kernels.hpp"

using namespace syncgame;
using namespace syncgame::kernels;

namespace {

Dfa random_dfa(unsigned n, unsigned k)
{
    std::mt19937_64 rng(n * 131 + k);
    std::uniform_int_distribution<State> target(0, n - 1);
    std::vector<State> table(static_cast<std::size_t>(n) * k);
    for (auto& t : table)
        t = target(rng);
    return Dfa(n, k, std::move(table));
}

template <ImageTable (*Build)(const Dfa&)>
void images(benchmark::State& state)
{
    const Dfa dfa = random_dfa(static_cast<unsigned>(state.range(0)), 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(Build(dfa).images.data());
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}

template <GameValues (*Solve)(const ImageTable&)>
void values(benchmark::State& state)
{
    const auto n = static_cast<unsigned>(state.range(0));
    const ImageTable table = build_image_table_parallel(duplication(cerny(n / 2), 1, 0));
    for (auto _ : state)
        benchmark::DoNotOptimize(Solve(table).alice.data());
    state.counters["threads"] = max_threads();
}

template <BestMoves (*Moves)(const ImageTable&, const GameValues&)>
void best(benchmark::State& state)
{
    const ImageTable table = build_image_table_parallel(random_dfa(static_cast<unsigned>(state.range(0)), 2));
    const GameValues v = solve_values_parallel(table);
    for (auto _ : state)
        benchmark::DoNotOptimize(Moves(table, v).alice.data());
}

} // namespace

BENCHMARK(images<build_image_table_serial>)->Name("images/serial")->DenseRange(14, 20, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(images<build_image_table_parallel>)->Name("images/parallel")->DenseRange(14, 20, 2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(values<solve_values_serial>)->Name("values/serial")->DenseRange(12, 18, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(values<solve_values_parallel>)->Name("values/parallel")->DenseRange(12, 18, 2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(best<best_moves_serial>)->Name("best/serial")->DenseRange(14, 20, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(best<best_moves_parallel>)->Name("best/parallel")->DenseRange(14, 20, 2)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
