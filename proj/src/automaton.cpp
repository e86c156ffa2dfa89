#include "syncgame/automaton.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace syncgame {

const char* to_string(ParseError::Kind kind) noexcept
{
    switch (kind) {
    case ParseError::Kind::syntax: return "syntax";
    case ParseError::Kind::schema: return "schema";
    case ParseError::Kind::arity: return "arity";
    case ParseError::Kind::bad_cost: return "bad_cost";
    case ParseError::Kind::state_range: return "state_range";
    case ParseError::Kind::degenerate: return "degenerate";
    }
    return "unknown";
}

StateSet::StateSet(unsigned width, std::uint64_t bits) : bits_(bits), width_(width)
{
    if (width > kMaxSetWidth)
        throw CapacityError("state set width " + std::to_string(width) + " exceeds 64");
    if (width < kMaxSetWidth && (bits >> width) != 0)
        throw DomainError("state set has members outside 0.." + std::to_string(width));
}

StateSet StateSet::full(unsigned width)
{
    if (width > kMaxSetWidth)
        throw CapacityError("state set width " + std::to_string(width) + " exceeds 64");
    return StateSet(width, width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1);
}

StateSet StateSet::singleton(unsigned width, State q)
{
    StateSet s(width, 0);
    s.insert(q);
    return s;
}

StateSet StateSet::of(unsigned width, std::initializer_list<State> states)
{
    StateSet s(width, 0);
    for (State q : states)
        s.insert(q);
    return s;
}

void StateSet::insert(State q)
{
    if (q >= width_)
        throw DomainError("state " + std::to_string(q) + " outside set width " + std::to_string(width_));
    bits_ |= std::uint64_t{1} << q;
}

std::vector<State> StateSet::states() const
{
    std::vector<State> out;
    out.reserve(size());
    for (std::uint64_t b = bits_; b != 0; b &= b - 1)
        out.push_back(static_cast<State>(std::countr_zero(b)));
    return out;
}

std::string to_string(const StateSet& set)
{
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (State q : set.states()) {
        if (!first)
            os << ',';
        os << q;
        first = false;
    }
    os << '}';
    return os.str();
}

std::vector<std::string> default_alphabet(unsigned k)
{
    std::vector<std::string> names;
    names.reserve(k);
    for (unsigned a = 0; a < k; ++a) {
        if (a < 26)
            names.emplace_back(1, static_cast<char>('a' + a));
        else
            names.push_back("l" + std::to_string(a));
    }
    return names;
}

namespace {

void check_shape(unsigned n, const std::vector<std::string>& alphabet, std::size_t table_size)
{
    if (n == 0)
        throw DomainError("automaton needs at least one state");
    if (alphabet.empty())
        throw DomainError("automaton needs at least one letter");
    if (table_size != static_cast<std::size_t>(n) * alphabet.size())
        throw DomainError("transition table has " + std::to_string(table_size) + " entries, expected " +
                          std::to_string(static_cast<std::size_t>(n) * alphabet.size()));
    std::set<std::string> seen;
    for (const auto& name : alphabet) {
        if (name.empty())
            throw DomainError("letter names must be non-empty");
        if (!seen.insert(name).second)
            throw DomainError("duplicate letter name '" + name + "'");
    }
}

} // namespace

Dfa::Dfa(unsigned n, std::vector<std::string> alphabet, std::vector<State> table)
    : n_(n), alphabet_(std::move(alphabet)), table_(std::move(table))
{
    check_shape(n_, alphabet_, table_.size());
    for (std::size_t i = 0; i < table_.size(); ++i)
        if (table_[i] >= n_)
            throw DomainError("transition (" + std::to_string(i / letters()) + ", " + alphabet_[i % letters()] +
                              ") leaves the state range");
}

Dfa::Dfa(unsigned n, unsigned k, std::vector<State> table) : Dfa(n, default_alphabet(k), std::move(table)) {}

Pfa::Pfa(unsigned n, std::vector<std::string> alphabet, std::vector<State> table)
    : n_(n), alphabet_(std::move(alphabet)), table_(std::move(table))
{
    check_shape(n_, alphabet_, table_.size());
    for (std::size_t i = 0; i < table_.size(); ++i)
        if (table_[i] != kUndefined && table_[i] >= n_)
            throw DomainError("transition (" + std::to_string(i / letters()) + ", " + alphabet_[i % letters()] +
                              ") leaves the state range");
}

Pfa::Pfa(unsigned n, unsigned k, std::vector<State> table) : Pfa(n, default_alphabet(k), std::move(table)) {}

Pfa::Pfa(const Dfa& dfa)
    : n_(dfa.states()), alphabet_(dfa.alphabet()), table_(dfa.table().begin(), dfa.table().end())
{
}

bool Pfa::is_total() const noexcept
{
    return std::none_of(table_.begin(), table_.end(), [](State t) { return t == kUndefined; });
}

Dwa::Dwa(Dfa dfa, std::vector<Cost> costs) : dfa_(std::move(dfa)), costs_(std::move(costs))
{
    if (costs_.size() != dfa_.table().size())
        throw DomainError("cost table size does not match the transition table");
    for (std::size_t i = 0; i < costs_.size(); ++i)
        if (costs_[i] == 0 || costs_[i] > kMaxCost)
            throw DomainError("cost of (" + std::to_string(i / letters()) + ", " + dfa_.alphabet()[i % letters()] +
                              ") must lie in [1, 2^63-1]");
}

State apply_letter(const Dfa& dfa, State q, Letter a)
{
    if (q >= dfa.states())
        throw DomainError("state " + std::to_string(q) + " out of range");
    if (a >= dfa.letters())
        throw DomainError("letter " + std::to_string(a) + " out of range");
    return dfa.next(q, a);
}

State apply_word(const Dfa& dfa, State q, std::span<const Letter> w)
{
    for (Letter a : w)
        q = apply_letter(dfa, q, a);
    return q;
}

StateSet image(const Dfa& dfa, const StateSet& p, std::span<const Letter> w)
{
    if (p.empty())
        throw DomainError("image of the empty state set");
    if (p.width() != dfa.states())
        throw DomainError("state set width does not match the automaton");
    for (Letter a : w)
        if (a >= dfa.letters())
            throw DomainError("letter " + std::to_string(a) + " out of range");
    std::uint64_t cur = p.bits();
    for (Letter a : w) {
        std::uint64_t next = 0;
        for (std::uint64_t b = cur; b != 0; b &= b - 1)
            next |= std::uint64_t{1} << dfa.next(static_cast<State>(std::countr_zero(b)), a);
        cur = next;
    }
    return StateSet(p.width(), cur);
}

std::string format_word(std::span<const std::string> alphabet, std::span<const Letter> w)
{
    bool compact = std::all_of(alphabet.begin(), alphabet.end(), [](const std::string& s) { return s.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!compact && i > 0)
            out += ' ';
        out += alphabet[w[i]];
    }
    return out;
}

Word parse_word(std::span<const std::string> alphabet, const std::string& text)
{
    auto lookup = [&](const std::string& token) -> Letter {
        for (std::size_t a = 0; a < alphabet.size(); ++a)
            if (alphabet[a] == token)
                return static_cast<Letter>(a);
        throw DomainError("unknown letter '" + token + "'");
    };

    Word w;
    if (text.find_first_of(" ,\t") != std::string::npos) {
        std::string token;
        for (char c : text + " ") {
            if (c == ' ' || c == ',' || c == '\t') {
                if (!token.empty())
                    w.push_back(lookup(token));
                token.clear();
            } else {
                token += c;
            }
        }
        return w;
    }
    bool compact = std::all_of(alphabet.begin(), alphabet.end(), [](const std::string& s) { return s.size() == 1; });
    if (!compact) {
        if (!text.empty())
            w.push_back(lookup(text));
        return w;
    }
    for (char c : text)
        w.push_back(lookup(std::string(1, c)));
    return w;
}

} // namespace syncgame
