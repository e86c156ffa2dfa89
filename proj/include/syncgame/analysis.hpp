#pragma once

#include <optional>

#include "syncgame/automaton.hpp"

namespace syncgame {

struct AnalysisResult {
    bool synchronizing = false;
    std::optional<Word> shortest_word;

    /// Length of shortest_word when present.
    std::optional<std::size_t> min_length() const
    {
        if (!shortest_word)
            return std::nullopt;
        return shortest_word->size();
    }
};

/// Pair-merging criterion: every pair of states can be merged by some word.
/// O(n^2 k) time and memory; no subset enumeration, no cap on n.
bool is_synchronizing(const Dfa& dfa);

/// Breadth-first search on the power automaton from Q to the first
/// singleton. Letters are tried in alphabet order, so the reported word is
/// the lexicographically least among the shortest reset words.
/// Requires n <= 64.
AnalysisResult shortest_reset_word(const Dfa& dfa);

/// Same search on the partial power automaton: P.a is undefined as soon as
/// one member of P has no a-transition. The result length never exceeds
/// 2^n - n - 1. Requires n <= 64.
AnalysisResult careful_shortest_word(const Pfa& pfa);

/// True iff w is applicable from every state and leaves one state.
bool is_careful_reset_word(const Pfa& pfa, std::span<const Letter> w);

} // namespace syncgame
