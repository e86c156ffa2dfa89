#pragma once

#include <bit>
#include <initializer_list>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "syncgame/errors.hpp"

namespace syncgame {

using State = std::uint32_t;
using Letter = std::uint32_t;
using Word = std::vector<Letter>;
using Cost = std::uint64_t;

/// Marks an undefined transition of a partial automaton.
inline constexpr State kUndefined = std::numeric_limits<State>::max();

/// Largest cost the interchange format round-trips (2^63 - 1).
inline constexpr Cost kMaxCost = static_cast<Cost>(std::numeric_limits<std::int64_t>::max());

/// Width cap of StateSet. Solvers that enumerate subsets use it as their
/// hard ceiling.
inline constexpr unsigned kMaxSetWidth = 64;

/// Subset of {0, ..., width-1} stored as a single 64-bit word.
class StateSet {
public:
    StateSet() = default;

    /// Throws CapacityError when width > 64 and DomainError when `bits` has a
    /// member >= width.
    StateSet(unsigned width, std::uint64_t bits);

    static StateSet full(unsigned width);
    static StateSet singleton(unsigned width, State q);
    static StateSet of(unsigned width, std::initializer_list<State> states);

    unsigned width() const noexcept { return width_; }
    std::uint64_t bits() const noexcept { return bits_; }
    unsigned size() const noexcept { return static_cast<unsigned>(std::popcount(bits_)); }
    bool empty() const noexcept { return bits_ == 0; }
    bool is_singleton() const noexcept { return std::has_single_bit(bits_); }
    bool contains(State q) const noexcept { return q < width_ && ((bits_ >> q) & 1U) != 0; }

    void insert(State q);

    /// Members in increasing order.
    std::vector<State> states() const;

    friend bool operator==(const StateSet&, const StateSet&) = default;

private:
    std::uint64_t bits_ = 0;
    unsigned width_ = 0;
};

std::string to_string(const StateSet& set);

/// Complete deterministic automaton. States are 0..n-1, letters 0..k-1;
/// letter display names exist only for I/O.
class Dfa {
public:
    /// `table` is row-major by state: table[q * k + a] = q.a.
    Dfa(unsigned n, std::vector<std::string> alphabet, std::vector<State> table);

    /// Letters named "a", "b", "c", ...
    Dfa(unsigned n, unsigned k, std::vector<State> table);

    unsigned states() const noexcept { return n_; }
    unsigned letters() const noexcept { return static_cast<unsigned>(alphabet_.size()); }
    const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
    std::span<const State> table() const noexcept { return table_; }

    /// Unchecked transition lookup for hot loops.
    State next(State q, Letter a) const noexcept { return table_[static_cast<std::size_t>(q) * letters() + a]; }

    friend bool operator==(const Dfa&, const Dfa&) = default;

private:
    unsigned n_;
    std::vector<std::string> alphabet_;
    std::vector<State> table_;
};

/// Partial automaton; undefined entries hold kUndefined.
class Pfa {
public:
    Pfa(unsigned n, std::vector<std::string> alphabet, std::vector<State> table);
    Pfa(unsigned n, unsigned k, std::vector<State> table);

    /// The same automaton viewed as partial (no undefined entries).
    explicit Pfa(const Dfa& dfa);

    unsigned states() const noexcept { return n_; }
    unsigned letters() const noexcept { return static_cast<unsigned>(alphabet_.size()); }
    const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
    std::span<const State> table() const noexcept { return table_; }
    State next(State q, Letter a) const noexcept { return table_[static_cast<std::size_t>(q) * letters() + a]; }
    bool is_total() const noexcept;

    friend bool operator==(const Pfa&, const Pfa&) = default;

private:
    unsigned n_;
    std::vector<std::string> alphabet_;
    std::vector<State> table_;
};

/// Deterministic weighted automaton: a Dfa plus a positive cost per transition.
class Dwa {
public:
    /// `costs` shares the layout of the Dfa table; every entry must lie in
    /// [1, kMaxCost].
    Dwa(Dfa dfa, std::vector<Cost> costs);

    const Dfa& dfa() const noexcept { return dfa_; }
    unsigned states() const noexcept { return dfa_.states(); }
    unsigned letters() const noexcept { return dfa_.letters(); }
    std::span<const Cost> costs() const noexcept { return costs_; }
    Cost cost(State q, Letter a) const noexcept { return costs_[static_cast<std::size_t>(q) * letters() + a]; }

    friend bool operator==(const Dwa&, const Dwa&) = default;

private:
    Dfa dfa_;
    std::vector<Cost> costs_;
};

std::vector<std::string> default_alphabet(unsigned k);

State apply_letter(const Dfa& dfa, State q, Letter a);
State apply_word(const Dfa& dfa, State q, std::span<const Letter> w);

/// {q.w : q in p}. Throws DomainError on an empty set or width mismatch.
StateSet image(const Dfa& dfa, const StateSet& p, std::span<const Letter> w);

/// Word spelled with the automaton's display names, e.g. "aab" or "x y x"
/// when some name is longer than one character.
std::string format_word(std::span<const std::string> alphabet, std::span<const Letter> w);

/// Inverse of format_word. Whitespace or commas separate multi-character
/// names; otherwise each character is one letter.
Word parse_word(std::span<const std::string> alphabet, const std::string& text);

} // namespace syncgame
