#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include "syncgame/automaton.hpp"

namespace syncgame::detail {

/// Dense index of the unordered pair {p, q}, p != q, into 0..C(n,2)-1.
inline std::size_t pair_index(State p, State q) noexcept
{
    if (p > q)
        std::swap(p, q);
    return static_cast<std::size_t>(q) * (q - 1) / 2 + p;
}

inline std::size_t pair_count(unsigned n) noexcept
{
    return static_cast<std::size_t>(n) * (n - 1) / 2;
}

/// Inverse of pair_index: returns (p, q) with p < q.
inline std::pair<State, State> pair_members(std::size_t index) noexcept
{
    State q = 1;
    while (static_cast<std::size_t>(q + 1) * q / 2 <= index)
        ++q;
    return {static_cast<State>(index - static_cast<std::size_t>(q) * (q - 1) / 2), q};
}

/// Image of a subset mask under one letter.
inline std::uint64_t image_mask(const Dfa& dfa, std::uint64_t set, Letter a) noexcept
{
    std::uint64_t out = 0;
    for (; set != 0; set &= set - 1)
        out |= std::uint64_t{1} << dfa.next(static_cast<State>(std::countr_zero(set)), a);
    return out;
}

inline std::uint64_t full_mask(unsigned n) noexcept
{
    return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

} // namespace syncgame::detail
