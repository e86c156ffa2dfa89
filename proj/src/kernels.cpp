#include "syncgame/kernels.hpp"

#include <algorithm>
#include <bit>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace syncgame::kernels {

namespace {

void check_dense(const Dfa& dfa)
{
    if (dfa.states() > kDenseMaxStates)
        throw CapacityError("dense subset tables support at most " + std::to_string(kDenseMaxStates) +
                            " states, got " + std::to_string(dfa.states()));
    if (dfa.letters() > 255)
        throw CapacityError("dense game tables support at most 255 letters");
}

// Subset images for masks of `bits` states starting at state `first`.
std::vector<std::uint32_t> partial_images(const Dfa& dfa, unsigned first, unsigned bits)
{
    const unsigned k = dfa.letters();
    std::vector<std::uint32_t> out((std::size_t{1} << bits) * k, 0);
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << bits); ++mask) {
        const auto low = static_cast<unsigned>(std::countr_zero(mask));
        const std::uint32_t rest = mask & (mask - 1);
        for (Letter a = 0; a < k; ++a)
            out[static_cast<std::size_t>(mask) * k + a] =
                out[static_cast<std::size_t>(rest) * k + a] | (std::uint32_t{1} << dfa.next(first + low, a));
    }
    return out;
}

bool is_singleton(std::uint32_t mask) noexcept
{
    return std::has_single_bit(mask);
}

} // namespace

int max_threads() noexcept
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

ImageTable build_image_table_serial(const Dfa& dfa)
{
    check_dense(dfa);
    return ImageTable{dfa.states(), dfa.letters(), partial_images(dfa, 0, dfa.states())};
}

ImageTable build_image_table_parallel(const Dfa& dfa)
{
    check_dense(dfa);
    const unsigned n = dfa.states();
    const unsigned k = dfa.letters();
    const unsigned low_bits = n / 2;
    const unsigned high_bits = n - low_bits;
    const auto low = partial_images(dfa, 0, low_bits);
    const auto high = partial_images(dfa, low_bits, high_bits);
    const std::uint32_t low_mask = (std::uint32_t{1} << low_bits) - 1;

    ImageTable table{n, k, std::vector<std::uint32_t>((std::size_t{1} << n) * k)};
    const auto count = static_cast<std::int64_t>(std::size_t{1} << n);
#pragma omp parallel for schedule(static)
    for (std::int64_t m = 0; m < count; ++m) {
        const auto mask = static_cast<std::uint32_t>(m);
        const std::size_t lo = static_cast<std::size_t>(mask & low_mask) * k;
        const std::size_t hi = static_cast<std::size_t>(mask >> low_bits) * k;
        for (Letter a = 0; a < k; ++a)
            table.images[static_cast<std::size_t>(mask) * k + a] = low[lo + a] | high[hi + a];
    }
    return table;
}

GameValues solve_values_serial(const ImageTable& table)
{
    const std::size_t size = table.size();
    const unsigned k = table.k;
    GameValues v{std::vector<std::uint32_t>(size, kInfinity), std::vector<std::uint32_t>(size, kInfinity)};
    for (std::uint32_t p = 1; p < size; ++p)
        if (is_singleton(p))
            v.alice[p] = v.bob[p] = 0;

    for (std::uint32_t round = 1;; ++round) {
        for (std::uint32_t p = 1; p < size; ++p) {
            if (v.bob[p] != kInfinity)
                continue;
            std::uint32_t worst = 0;
            bool fixed = true;
            for (Letter a = 0; a < k && fixed; ++a) {
                const std::uint32_t x = v.alice[table.at(p, a)];
                fixed = x != kInfinity;
                worst = std::max(worst, x);
            }
            if (fixed)
                v.bob[p] = worst;
        }
        bool changed = false;
        for (std::uint32_t p = 1; p < size; ++p) {
            if (v.alice[p] != kInfinity)
                continue;
            for (Letter a = 0; a < k; ++a) {
                if (v.bob[table.at(p, a)] != kInfinity) {
                    v.alice[p] = round;
                    changed = true;
                    break;
                }
            }
        }
        if (!changed)
            return v;
    }
}

GameValues solve_values_parallel(const ImageTable& table)
{
    const std::size_t size = table.size();
    const unsigned k = table.k;
    GameValues v{std::vector<std::uint32_t>(size, kInfinity), std::vector<std::uint32_t>(size, kInfinity)};
    std::vector<std::uint32_t> open_alice;
    std::vector<std::uint32_t> open_bob;
    open_alice.reserve(size);
    open_bob.reserve(size);
    for (std::uint32_t p = 1; p < size; ++p) {
        if (is_singleton(p)) {
            v.alice[p] = v.bob[p] = 0;
        } else {
            open_alice.push_back(p);
            open_bob.push_back(p);
        }
    }

    std::vector<std::uint8_t> settled;
    for (std::uint32_t round = 1;; ++round) {
        // Bob phase reads alice[] and writes bob[] at its own index only.
        const auto nb = static_cast<std::int64_t>(open_bob.size());
#pragma omp parallel for schedule(dynamic, 4096)
        for (std::int64_t i = 0; i < nb; ++i) {
            const std::uint32_t p = open_bob[static_cast<std::size_t>(i)];
            std::uint32_t worst = 0;
            bool fixed = true;
            for (Letter a = 0; a < k && fixed; ++a) {
                const std::uint32_t x = v.alice[table.at(p, a)];
                fixed = x != kInfinity;
                worst = std::max(worst, x);
            }
            if (fixed)
                v.bob[p] = worst;
        }
        std::erase_if(open_bob, [&](std::uint32_t p) { return v.bob[p] != kInfinity; });

        // Alice phase reads bob[] and writes alice[].
        const auto na = static_cast<std::int64_t>(open_alice.size());
        std::size_t fixed_now = 0;
#pragma omp parallel for schedule(dynamic, 4096) reduction(+ : fixed_now)
        for (std::int64_t i = 0; i < na; ++i) {
            const std::uint32_t p = open_alice[static_cast<std::size_t>(i)];
            for (Letter a = 0; a < k; ++a) {
                if (v.bob[table.at(p, a)] != kInfinity) {
                    v.alice[p] = round;
                    ++fixed_now;
                    break;
                }
            }
        }
        if (fixed_now == 0)
            return v;
        std::erase_if(open_alice, [&](std::uint32_t p) { return v.alice[p] != kInfinity; });
    }
}

namespace {

void best_moves_at(const ImageTable& table, const GameValues& values, std::uint32_t p, BestMoves& out)
{
    std::uint8_t alice_best = 0;
    std::uint8_t bob_best = 0;
    for (Letter a = 1; a < table.k; ++a) {
        const std::uint32_t next = table.at(p, a);
        if (values.bob[next] < values.bob[table.at(p, alice_best)])
            alice_best = static_cast<std::uint8_t>(a);
        if (values.alice[next] > values.alice[table.at(p, bob_best)])
            bob_best = static_cast<std::uint8_t>(a);
    }
    out.alice[p] = alice_best;
    out.bob[p] = bob_best;
}

} // namespace

BestMoves best_moves_serial(const ImageTable& table, const GameValues& values)
{
    BestMoves out{std::vector<std::uint8_t>(table.size(), 0), std::vector<std::uint8_t>(table.size(), 0)};
    for (std::uint32_t p = 1; p < table.size(); ++p)
        best_moves_at(table, values, p, out);
    return out;
}

BestMoves best_moves_parallel(const ImageTable& table, const GameValues& values)
{
    BestMoves out{std::vector<std::uint8_t>(table.size(), 0), std::vector<std::uint8_t>(table.size(), 0)};
    const auto size = static_cast<std::int64_t>(table.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 1; p < size; ++p)
        best_moves_at(table, values, static_cast<std::uint32_t>(p), out);
    return out;
}

} // namespace syncgame::kernels
