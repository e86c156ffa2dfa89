#include "syncgame/constructions.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <sstream>

namespace syncgame {

Dfa cerny(unsigned n)
{
    if (n < 2)
        throw DomainError("Cerny automata need n >= 2, got " + std::to_string(n));
    std::vector<State> table(static_cast<std::size_t>(n) * 2);
    for (State m = 0; m < n; ++m) {
        table[m * 2 + 0] = m == 0 ? 1 : m;
        table[m * 2 + 1] = (m + 1) % n;
    }
    return Dfa(n, 2, std::move(table));
}

Dfa duplication(const Dfa& dfa, Letter b, State q0, bool pad_odd)
{
    const unsigned n = dfa.states();
    const unsigned k = dfa.letters();
    if (k < 2)
        throw DomainError("duplication needs at least two letters");
    if (b >= k)
        throw DomainError("letter " + std::to_string(b) + " out of range");
    if (q0 >= n)
        throw DomainError("state " + std::to_string(q0) + " out of range");

    const unsigned total = 2 * n + (pad_odd ? 1 : 0);
    std::vector<State> table(static_cast<std::size_t>(total) * k);
    for (State q = 0; q < n; ++q) {
        for (Letter a = 0; a < k; ++a) {
            table[static_cast<std::size_t>(q) * k + a] = n + dfa.next(q, a);
            table[static_cast<std::size_t>(n + q) * k + a] = a == b ? q : n + q0;
        }
    }
    if (pad_odd)
        for (Letter a = 0; a < k; ++a)
            table[static_cast<std::size_t>(2 * n) * k + a] = n + q0;
    return Dfa(total, dfa.alphabet(), std::move(table));
}

// ---------------------------------------------------------------------------
// CNF

CnfFormula::CnfFormula(unsigned num_vars, std::vector<std::vector<Literal>> clauses)
    : num_vars_(num_vars), clauses_(std::move(clauses))
{
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
        auto& c = clauses_[i];
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (c[j].var >= num_vars_)
                throw DomainError("clause " + std::to_string(i + 1) + " mentions variable " +
                                  std::to_string(c[j].var + 1) + " of " + std::to_string(num_vars_));
            if (j > 0 && c[j].var == c[j - 1].var)
                throw DomainError("clause " + std::to_string(i + 1) + " contains x" + std::to_string(c[j].var + 1) +
                                  " with both polarities");
        }
    }
}

bool CnfFormula::contains(std::size_t clause, Literal lit) const
{
    const auto& c = clauses_.at(clause);
    return std::binary_search(c.begin(), c.end(), lit);
}

bool CnfFormula::evaluate(const std::vector<bool>& values) const
{
    return std::all_of(clauses_.begin(), clauses_.end(), [&](const std::vector<Literal>& c) {
        return std::any_of(c.begin(), c.end(), [&](const Literal& l) { return values.at(l.var) == l.positive; });
    });
}

CnfFormula parse_dimacs(std::string_view text)
{
    using Kind = ParseError::Kind;
    std::istringstream in{std::string(text)};
    std::string line;
    unsigned line_no = 0;
    long vars = -1, declared = -1;
    std::vector<std::vector<Literal>> clauses;
    std::vector<Literal> current;

    auto where = [&] { return "line " + std::to_string(line_no); };

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first[0] == 'c' || first[0] == '%')
            continue;
        if (first == "p") {
            std::string format;
            if (vars >= 0)
                throw ParseError(Kind::syntax, where(), "duplicate problem line");
            if (!(ls >> format >> vars >> declared) || format != "cnf" || vars < 0 || declared < 0)
                throw ParseError(Kind::syntax, where(), "expected 'p cnf <vars> <clauses>'");
            continue;
        }
        if (vars < 0)
            throw ParseError(Kind::schema, where(), "clause before the problem line");
        std::istringstream tokens(line);
        std::string token;
        while (tokens >> token) {
            long value = 0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
            if (ec != std::errc{} || ptr != token.data() + token.size())
                throw ParseError(Kind::syntax, where(), "bad literal '" + token + "'");
            if (value == 0) {
                clauses.push_back(std::move(current));
                current.clear();
                continue;
            }
            const long var = value < 0 ? -value : value;
            if (var > vars)
                throw ParseError(Kind::state_range, where(), "variable " + std::to_string(var) + " exceeds " +
                                                                 std::to_string(vars));
            current.push_back({static_cast<unsigned>(var - 1), value > 0});
        }
    }
    if (vars < 0)
        throw ParseError(Kind::schema, "", "missing 'p cnf' problem line");
    if (!current.empty())
        throw ParseError(Kind::syntax, where(), "last clause is not terminated by 0");
    if (static_cast<long>(clauses.size()) != declared)
        throw ParseError(Kind::arity, "", "header declares " + std::to_string(declared) + " clauses, found " +
                                              std::to_string(clauses.size()));
    try {
        return CnfFormula(static_cast<unsigned>(vars), std::move(clauses));
    } catch (const DomainError& e) {
        throw ParseError(Kind::degenerate, "", e.what());
    }
}

std::string to_dimacs(const CnfFormula& formula)
{
    std::ostringstream os;
    os << "p cnf " << formula.num_vars() << ' ' << formula.clauses().size() << '\n';
    for (const auto& c : formula.clauses()) {
        for (const auto& l : c)
            os << (l.positive ? "" : "-") << l.var + 1 << ' ';
        os << "0\n";
    }
    return os.str();
}

CnfFormula psi0()
{
    return CnfFormula(3, {
                             {{0, true}, {1, true}, {2, true}},
                             {{0, false}, {1, true}, {2, true}},
                             {{0, true}, {1, false}, {2, true}},
                             {{1, false}, {2, false}},
                         });
}

bool qsat_alice_wins(const CnfFormula& formula)
{
    std::vector<bool> values(formula.num_vars());
    std::function<bool(unsigned)> solve = [&](unsigned v) -> bool {
        if (v == formula.num_vars())
            return formula.evaluate(values);
        const bool alice = v % 2 == 0;
        for (bool choice : {true, false}) {
            values[v] = choice;
            const bool win = solve(v + 1);
            if (alice && win)
                return true;
            if (!alice && !win)
                return false;
        }
        return !alice;
    };
    return solve(0);
}

Dfa eppstein_qsat(const CnfFormula& formula)
{
    const unsigned n = formula.num_vars();
    const auto m = static_cast<unsigned>(formula.clauses().size());
    if (m == 0)
        throw DomainError("the gadget needs at least one clause");
    const unsigned states = (n + 1) * m + 1;
    const State z = states - 1;
    std::vector<State> table(static_cast<std::size_t>(states) * 2, z);
    for (unsigned i = 0; i < m; ++i) {
        for (unsigned j = 0; j < n; ++j) {
            const State q = i * (n + 1) + j;
            table[q * 2 + 0] = formula.contains(i, {j, true}) ? z : q + 1;
            table[q * 2 + 1] = formula.contains(i, {j, false}) ? z : q + 1;
        }
    }
    return Dfa(states, 2, std::move(table));
}

// ---------------------------------------------------------------------------
// Weighted reductions

BudgetInstance pfa_to_dwa(const Pfa& pfa)
{
    const unsigned n = pfa.states();
    if (n > 62)
        throw CapacityError("pfa_to_dwa supports at most 62 states, got " + std::to_string(n));
    const Cost forbidden = Cost{1} << n;
    const unsigned k = pfa.letters();
    std::vector<State> table(static_cast<std::size_t>(n) * k);
    std::vector<Cost> costs(table.size());
    for (State q = 0; q < n; ++q) {
        for (Letter a = 0; a < k; ++a) {
            const std::size_t i = static_cast<std::size_t>(q) * k + a;
            const State t = pfa.next(q, a);
            table[i] = t == kUndefined ? q : t;
            costs[i] = t == kUndefined ? forbidden : 1;
        }
    }
    return {Dwa(Dfa(n, pfa.alphabet(), std::move(table)), std::move(costs)), forbidden - 1};
}

Dwa expensive_loop_dwa()
{
    // rows: state -> (a, b)
    Dfa dfa(4, 2, {1, 1, 1, 2, 2, 3, 0, 3});
    return Dwa(std::move(dfa), {1, 1, 1, 1, 1, 1, 1, 16});
}

Pfa partial_loop_pfa()
{
    return Pfa(4, 2, {1, 1, 1, 2, 2, 3, 0, kUndefined});
}

} // namespace syncgame
