#pragma once

#include <cstddef>
#include <optional>
#include <stop_token>

#include "syncgame/automaton.hpp"
#include "syncgame/constructions.hpp"

namespace syncgame {

/// Sum of transition costs along the path of w from q (0 for the empty
/// word). Saturates at the largest uint64 value instead of wrapping.
Cost word_cost(const Dwa& dwa, State q, std::span<const Letter> w);

/// max over q of word_cost(q, w). Throws ContractError naming two states
/// with different end points when w is not a reset word.
Cost sync_cost(const Dwa& dwa, std::span<const Letter> w);

struct BudgetOptions {
    unsigned max_states = 16;
    /// Witnesses longer than this are dropped (the decision is still exact).
    std::size_t max_witness_length = 1U << 16;
    /// Cap on stored profiles; exceeding it raises CapacityError.
    std::size_t max_profiles = 20'000'000;
};

struct BudgetResult {
    bool within_budget = false;
    std::optional<Word> witness;
    /// Synchronization cost of the cheapest reset word found; set whenever
    /// within_budget holds, even if the witness itself was dropped.
    std::optional<Cost> witness_cost;
    bool witness_truncated = false;
};

/// Exact decision of "some reset word w has sync_cost(w) <= B".
///
/// Best-first search over cost profiles (per start state: current state and
/// cost so far) ordered by their maximum cost. Profiles over budget are
/// discarded, and a profile is pruned when another profile with the same
/// state vector has componentwise lower or equal costs. The first
/// synchronized profile popped is a cheapest reset word.
BudgetResult budget_decide(const BudgetInstance& instance, const BudgetOptions& options = {},
                           std::stop_token stop = {});

/// Least B with budget_decide true; nullopt when the automaton is not
/// synchronizing. Binary search seeded by the cost of a shortest reset word.
std::optional<Cost> min_sync_cost(const Dwa& dwa, const BudgetOptions& options = {}, std::stop_token stop = {});

struct GameBudgetOptions {
    unsigned max_states = 10;
    Cost max_budget = 20'000;
    std::size_t max_nodes = 20'000'000;
};

/// Can Alice win the synchronization game on the underlying automaton so
/// that the joint move sequence w (both players' letters) has
/// sync_cost(w) <= B? Minimax over (cost profile, mover) with memoisation;
/// positions Bob wins outright are cut by the pair game.
bool game_on_budget(const Dwa& dwa, Cost budget, const GameBudgetOptions& options = {}, std::stop_token stop = {});

} // namespace syncgame
