#pragma once

#include <string_view>
#include <vector>

#include "syncgame/automaton.hpp"

namespace syncgame {

/// Cerny automaton C_n: letter a (index 0) sends 0 to 1 and fixes the rest,
/// letter b (index 1) is the cyclic shift m -> m+1 mod n.
Dfa cerny(unsigned n);

/// Duplication of `dfa` on states Q x {0,1}, numbered (q,0) = q and
/// (q,1) = n + q:
///   (q,0).a = (q.a, 1)   for every letter a,
///   (q,1).b = (q,0),
///   (q,1).a = (q0, 1)    for a != b.
/// With `pad_odd`, state 2n is added and every letter sends it to (q0,1).
Dfa duplication(const Dfa& dfa, Letter b, State q0, bool pad_odd = false);

struct Literal {
    unsigned var;   // 0-based variable index
    bool positive;

    friend bool operator==(const Literal&, const Literal&) = default;
    friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// CNF formula. Clauses are sorted, duplicate-free literal lists; a clause
/// holding both polarities of one variable is rejected.
class CnfFormula {
public:
    CnfFormula(unsigned num_vars, std::vector<std::vector<Literal>> clauses);

    unsigned num_vars() const noexcept { return num_vars_; }
    const std::vector<std::vector<Literal>>& clauses() const noexcept { return clauses_; }

    bool contains(std::size_t clause, Literal lit) const;

    /// Value under a full assignment (values[v] for variable v).
    bool evaluate(const std::vector<bool>& values) const;

private:
    unsigned num_vars_;
    std::vector<std::vector<Literal>> clauses_;
};

/// DIMACS text: optional "c" comment lines, a "p cnf <vars> <clauses>"
/// header, then zero-terminated clauses of signed 1-based literals.
CnfFormula parse_dimacs(std::string_view text);
std::string to_dimacs(const CnfFormula& formula);

/// {x1 v x2 v x3, -x1 v x2 v x3, x1 v -x2 v x3, -x2 v -x3}.
CnfFormula psi0();

/// Alternating game on the formula: Alice sets x1, Bob x2, Alice x3, ...;
/// Alice wins iff the formula ends up true. Exhaustive over the game tree.
bool qsat_alice_wins(const CnfFormula& formula);

/// Eppstein's gadget with (n+1)m + 1 states. Row i (clause c_{i+1}) holds
/// states i(n+1) + j for j = 0..n; the sink z is the last state. Letter a
/// reads "true", letter b "false": a state in column j < n jumps to z when
/// its clause contains the matching literal of x_{j+1} and moves right
/// otherwise; column n and z go to z.
Dfa eppstein_qsat(const CnfFormula& formula);

struct BudgetInstance {
    Dwa dwa;
    Cost budget;
};

/// Undefined transitions become cost-2^n self-loops, defined ones cost 1,
/// and the budget is 2^n - 1. Requires n <= 62.
BudgetInstance pfa_to_dwa(const Pfa& pfa);

/// The four-state weighted automaton with the expensive b-loop on state 3.
Dwa expensive_loop_dwa();

/// Its partial preimage: the same automaton with b undefined on state 3.
Pfa partial_loop_pfa();

} // namespace syncgame
