#include "syncgame/analysis.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <unordered_map>

#include "syncgame/detail/pairs.hpp"

namespace syncgame {

using detail::pair_count;
using detail::pair_index;

bool is_synchronizing(const Dfa& dfa)
{
    const unsigned n = dfa.states();
    const unsigned k = dfa.letters();
    if (n == 1)
        return true;

    // Reverse edges of the pair graph, bucketed by target pair (CSR layout).
    const std::size_t pairs = pair_count(n);
    std::vector<std::uint32_t> in_degree(pairs + 1, 0);
    std::vector<std::uint8_t> merged(pairs, 0);
    std::vector<std::size_t> succ(pairs * k);
    for (State q = 1; q < n; ++q) {
        for (State p = 0; p < q; ++p) {
            const std::size_t i = pair_index(p, q);
            for (Letter a = 0; a < k; ++a) {
                State pa = dfa.next(p, a), qa = dfa.next(q, a);
                if (pa == qa) {
                    merged[i] = 1;
                    succ[i * k + a] = pairs;
                } else {
                    succ[i * k + a] = pair_index(pa, qa);
                    ++in_degree[succ[i * k + a]];
                }
            }
        }
    }
    std::vector<std::size_t> offset(pairs + 2, 0);
    for (std::size_t i = 0; i <= pairs; ++i)
        offset[i + 1] = offset[i] + in_degree[i];
    std::vector<std::size_t> preds(offset[pairs + 1]);
    std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
    for (std::size_t i = 0; i < pairs; ++i)
        for (Letter a = 0; a < k; ++a)
            if (succ[i * k + a] != pairs)
                preds[fill[succ[i * k + a]]++] = i;

    std::vector<std::uint8_t> reached(merged);
    std::deque<std::size_t> queue;
    std::size_t count = 0;
    for (std::size_t i = 0; i < pairs; ++i)
        if (reached[i]) {
            queue.push_back(i);
            ++count;
        }
    while (!queue.empty()) {
        std::size_t i = queue.front();
        queue.pop_front();
        for (std::size_t e = offset[i]; e < offset[i + 1]; ++e) {
            std::size_t p = preds[e];
            if (!reached[p]) {
                reached[p] = 1;
                ++count;
                queue.push_back(p);
            }
        }
    }
    return count == pairs;
}

namespace {

struct Parent {
    std::uint64_t previous;
    Letter letter;
};

// BFS over subsets from the full set. `step(set, a)` returns the successor
// mask or 0 when the transition is undefined.
template <typename Step>
AnalysisResult power_bfs(unsigned n, unsigned k, Step step)
{
    if (n > kMaxSetWidth)
        throw CapacityError("subset search supports at most 64 states, got " + std::to_string(n));

    const std::uint64_t start = detail::full_mask(n);
    if (std::has_single_bit(start))
        return {true, Word{}};

    std::unordered_map<std::uint64_t, Parent> parent;
    parent.emplace(start, Parent{start, 0});
    std::deque<std::uint64_t> queue{start};
    while (!queue.empty()) {
        const std::uint64_t cur = queue.front();
        queue.pop_front();
        for (Letter a = 0; a < k; ++a) {
            const std::uint64_t next = step(cur, a);
            if (next == 0 || parent.count(next))
                continue;
            parent.emplace(next, Parent{cur, a});
            if (std::has_single_bit(next)) {
                Word w;
                for (std::uint64_t s = next; s != start; s = parent.at(s).previous)
                    w.push_back(parent.at(s).letter);
                std::reverse(w.begin(), w.end());
                return {true, std::move(w)};
            }
            queue.push_back(next);
        }
    }
    return {false, std::nullopt};
}

} // namespace

AnalysisResult shortest_reset_word(const Dfa& dfa)
{
    return power_bfs(dfa.states(), dfa.letters(),
                     [&](std::uint64_t set, Letter a) { return detail::image_mask(dfa, set, a); });
}

AnalysisResult careful_shortest_word(const Pfa& pfa)
{
    const unsigned n = pfa.states();
    auto result = power_bfs(n, pfa.letters(), [&](std::uint64_t set, Letter a) -> std::uint64_t {
        std::uint64_t out = 0;
        for (; set != 0; set &= set - 1) {
            State t = pfa.next(static_cast<State>(std::countr_zero(set)), a);
            if (t == kUndefined)
                return 0;
            out |= std::uint64_t{1} << t;
        }
        return out;
    });
    // Path visits only distinct non-singleton subsets before the final one.
    if (result.shortest_word && n < 64)
        assert(result.shortest_word->size() + n + 1 <= (std::uint64_t{1} << n));
    return result;
}

bool is_careful_reset_word(const Pfa& pfa, std::span<const Letter> w)
{
    if (pfa.states() > kMaxSetWidth)
        throw CapacityError("careful reset check supports at most 64 states");
    std::uint64_t cur = detail::full_mask(pfa.states());
    for (Letter a : w) {
        if (a >= pfa.letters())
            throw DomainError("letter " + std::to_string(a) + " out of range");
        std::uint64_t next = 0;
        for (std::uint64_t s = cur; s != 0; s &= s - 1) {
            State t = pfa.next(static_cast<State>(std::countr_zero(s)), a);
            if (t == kUndefined)
                return false;
            next |= std::uint64_t{1} << t;
        }
        cur = next;
    }
    return std::has_single_bit(cur);
}

} // namespace syncgame
