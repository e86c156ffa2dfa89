#pragma once

// Random instance generators and brute-force oracles shared by the unit and
// acceptance tests. The oracles deliberately avoid the library's solvers:
// they work on std::set<State> and plain recursion.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "syncgame/automaton.hpp"
#include "syncgame/constructions.hpp"

namespace oracle {

using namespace syncgame;
using Coins = std::set<State>;

inline Dfa random_dfa(std::mt19937_64& rng, unsigned n, unsigned k)
{
    std::uniform_int_distribution<State> target(0, n - 1);
    std::vector<State> table(static_cast<std::size_t>(n) * k);
    for (auto& t : table)
        t = target(rng);
    return Dfa(n, k, std::move(table));
}

inline Pfa random_pfa(std::mt19937_64& rng, unsigned n, unsigned k, double hole = 0.2)
{
    std::uniform_int_distribution<State> target(0, n - 1);
    std::bernoulli_distribution undefined(hole);
    std::vector<State> table(static_cast<std::size_t>(n) * k);
    for (auto& t : table)
        t = undefined(rng) ? kUndefined : target(rng);
    return Pfa(n, k, std::move(table));
}

inline Dwa random_dwa(std::mt19937_64& rng, unsigned n, unsigned k, Cost max_cost)
{
    Dfa dfa = random_dfa(rng, n, k);
    std::uniform_int_distribution<Cost> cost(1, max_cost);
    std::vector<Cost> costs(static_cast<std::size_t>(n) * k);
    for (auto& c : costs)
        c = cost(rng);
    return Dwa(std::move(dfa), std::move(costs));
}

inline Coins all_states(unsigned n)
{
    Coins c;
    for (State q = 0; q < n; ++q)
        c.insert(q);
    return c;
}

inline Coins step(const Dfa& dfa, const Coins& c, Letter a)
{
    Coins out;
    for (State q : c)
        out.insert(dfa.next(q, a));
    return out;
}

// Partial step; nullopt when some coin has no a-edge.
inline std::optional<Coins> careful_step(const Pfa& pfa, const Coins& c, Letter a)
{
    Coins out;
    for (State q : c) {
        const State t = pfa.next(q, a);
        if (t == kUndefined)
            return std::nullopt;
        out.insert(t);
    }
    return out;
}

// Calls f(word) for every word over k letters of length len, in lexicographic order.
template <class F>
bool each_word(unsigned k, std::size_t len, F&& f)
{
    Word w(len, 0);
    while (true) {
        if (f(w))
            return true;
        std::size_t i = len;
        while (i > 0 && w[i - 1] + 1 == k)
            w[--i] = 0;
        if (i == 0)
            return false;
        ++w[i - 1];
    }
}

// Lexicographically least shortest reset word of length <= max_len.
inline std::optional<Word> least_reset_word(const Dfa& dfa, std::size_t max_len)
{
    for (std::size_t len = 0; len <= max_len; ++len) {
        std::optional<Word> found;
        each_word(dfa.letters(), len, [&](const Word& w) {
            Coins c = all_states(dfa.states());
            for (Letter a : w)
                c = step(dfa, c, a);
            if (c.size() == 1)
                found = w;
            return found.has_value();
        });
        if (found)
            return found;
    }
    return std::nullopt;
}

inline std::optional<Word> least_careful_word(const Pfa& pfa, std::size_t max_len)
{
    for (std::size_t len = 0; len <= max_len; ++len) {
        std::optional<Word> found;
        each_word(pfa.letters(), len, [&](const Word& w) {
            std::optional<Coins> c = all_states(pfa.states());
            for (Letter a : w) {
                c = careful_step(pfa, *c, a);
                if (!c)
                    return false;
            }
            if (c->size() == 1)
                found = w;
            return found.has_value();
        });
        if (found)
            return found;
    }
    return std::nullopt;
}

// Cheapest synchronization cost among all words with every path cost <= B,
// by depth-first enumeration (every transition costs at least 1, so words
// are at most B long).
inline std::optional<Cost> cheapest_within(const Dwa& dwa, Cost budget)
{
    const unsigned n = dwa.states();
    std::optional<Cost> best;
    std::vector<State> at(n);
    std::vector<Cost> spent(n, 0);
    for (State q = 0; q < n; ++q)
        at[q] = q;
    auto rec = [&](auto&& self) -> void {
        if (std::all_of(at.begin(), at.end(), [&](State s) { return s == at[0]; })) {
            const Cost c = *std::max_element(spent.begin(), spent.end());
            if (!best || c < *best)
                best = c;
        }
        for (Letter a = 0; a < dwa.letters(); ++a) {
            const auto saved_at = at;
            const auto saved_spent = spent;
            bool over = false;
            for (State q = 0; q < n; ++q) {
                spent[q] += dwa.cost(at[q], a);
                at[q] = dwa.dfa().next(at[q], a);
                over = over || spent[q] > budget;
            }
            if (!over)
                self(self);
            at = saved_at;
            spent = saved_spent;
        }
    };
    rec(rec);
    return best;
}

// Alice-move game values by value iteration over explicit coin sets.
// Returns nullopt where Bob wins. Exponential; keep n small.
struct GameOracle {
    const Dfa& dfa;
    std::map<std::pair<Coins, bool>, std::optional<std::uint64_t>> values;

    explicit GameOracle(const Dfa& d) : dfa(d)
    {
        std::vector<Coins> sets;
        const unsigned n = dfa.states();
        for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
            Coins c;
            for (State q = 0; q < n; ++q)
                if ((m >> q) & 1U)
                    c.insert(q);
            sets.push_back(c);
        }
        for (const auto& c : sets) {
            values[{c, false}] = c.size() == 1 ? std::optional<std::uint64_t>(0) : std::nullopt;
            values[{c, true}] = values[{c, false}];
        }
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& c : sets) {
                if (c.size() == 1)
                    continue;
                // Alice (false): 1 + min over letters of Bob's value.
                std::optional<std::uint64_t> alice;
                std::optional<std::uint64_t> bob = 0;
                for (Letter a = 0; a < dfa.letters(); ++a) {
                    const Coins next = step(dfa, c, a);
                    const auto vb = values[{next, true}];
                    if (vb && (!alice || *vb + 1 < *alice))
                        alice = *vb + 1;
                    const auto va = values[{next, false}];
                    if (!va || !bob)
                        bob = std::nullopt;
                    else
                        bob = std::max(*bob, *va);
                }
                if (alice != values[{c, false}]) {
                    values[{c, false}] = alice;
                    changed = true;
                }
                if (bob != values[{c, true}]) {
                    values[{c, true}] = bob;
                    changed = true;
                }
            }
        }
    }

    std::optional<std::uint64_t> value(const Coins& c, bool bob_to_move) const
    {
        return values.at({c, bob_to_move});
    }
    std::optional<std::uint64_t> start() const { return value(all_states(dfa.states()), false); }
};

// Can Alice merge all coins within `left` half-moves? Plain minimax.
inline bool wins_within_halfmoves(const Dfa& dfa, const Coins& c, bool bob, std::uint64_t left)
{
    if (c.size() == 1)
        return true;
    if (left == 0)
        return false;
    for (Letter a = 0; a < dfa.letters(); ++a) {
        const bool w = wins_within_halfmoves(dfa, step(dfa, c, a), !bob, left - 1);
        if (!bob && w)
            return true;
        if (bob && !w)
            return false;
    }
    return bob;
}

// All-moves game on budget: can Alice force a joint word of sync cost <= B?
inline bool budget_game(const Dwa& dwa, const std::vector<State>& at, const std::vector<Cost>& spent, bool bob,
                        Cost budget)
{
    if (std::all_of(at.begin(), at.end(), [&](State s) { return s == at[0]; }))
        return true;
    for (Letter a = 0; a < dwa.letters(); ++a) {
        std::vector<State> nat(at.size());
        std::vector<Cost> nspent(at.size());
        bool over = false;
        for (std::size_t q = 0; q < at.size(); ++q) {
            nspent[q] = spent[q] + dwa.cost(at[q], a);
            nat[q] = dwa.dfa().next(at[q], a);
            over = over || nspent[q] > budget;
        }
        const bool w = !over && budget_game(dwa, nat, nspent, !bob, budget);
        if (!bob && w)
            return true;
        if (bob && !w)
            return false;
    }
    return bob;
}

inline bool budget_game(const Dwa& dwa, Cost budget)
{
    std::vector<State> at(dwa.states());
    for (State q = 0; q < dwa.states(); ++q)
        at[q] = q;
    return budget_game(dwa, at, std::vector<Cost>(dwa.states(), 0), false, budget);
}

// Some letter other than b sends every state to q0; the duplication then
// resets in one letter instead of two.
inline bool collapses_to(const Dfa& dfa, Letter b, State q0)
{
    for (Letter a = 0; a < dfa.letters(); ++a) {
        if (a == b)
            continue;
        bool all = true;
        for (State q = 0; q < dfa.states(); ++q)
            all = all && dfa.next(q, a) == q0;
        if (all)
            return true;
    }
    return false;
}

// Every CNF over two variables with at most two distinct non-tautological
// non-empty clauses, as ordered clause pairs (64 formulas).
inline std::vector<CnfFormula> two_variable_formulas()
{
    std::vector<std::vector<Literal>> clauses;
    for (int s0 = 0; s0 < 3; ++s0)
        for (int s1 = 0; s1 < 3; ++s1) {
            std::vector<Literal> c;
            if (s0 > 0)
                c.push_back({0, s0 == 1});
            if (s1 > 0)
                c.push_back({1, s1 == 1});
            if (!c.empty())
                clauses.push_back(c);
        }
    std::vector<CnfFormula> out;
    for (const auto& c1 : clauses)
        for (const auto& c2 : clauses)
            out.emplace_back(2, std::vector<std::vector<Literal>>{c1, c2});
    return out;
}

// Independent QSAT game: Alice picks odd-numbered variables (x1, x3, ...).
inline bool qsat_value(const CnfFormula& f, std::vector<bool>& v, unsigned i)
{
    if (i == f.num_vars()) {
        for (const auto& c : f.clauses()) {
            bool sat = false;
            for (const auto& l : c)
                sat = sat || v[l.var] == l.positive;
            if (!sat)
                return false;
        }
        return true;
    }
    bool any = false, all = true;
    for (bool b : {false, true}) {
        v[i] = b;
        const bool r = qsat_value(f, v, i + 1);
        any = any || r;
        all = all && r;
    }
    return i % 2 == 0 ? any : all;
}

} // namespace oracle
