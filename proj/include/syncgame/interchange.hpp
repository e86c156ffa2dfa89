#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "syncgame/automaton.hpp"

namespace syncgame {

using AnyAutomaton = std::variant<Dfa, Pfa, Dwa>;

/// A parsed interchange document. `budget` is the optional top-level
/// "budget" field emitted alongside reductions to weighted automata.
struct Document {
    AnyAutomaton automaton;
    std::optional<Cost> budget;
};

/// Parses
///   {"n": int, "alphabet": [...], "delta": {"a": [t0, ...], ...},
///    "gamma": {"a": [c0, ...], ...}?, "budget": int?}
/// A null delta entry makes the result a Pfa; a gamma table makes it a Dwa.
/// Errors carry a JSON-pointer location (or a byte offset for syntax errors).
Document parse_document(std::string_view text);
AnyAutomaton parse_automaton(std::string_view text);

/// Canonical text: fields in the order n, alphabet, delta, gamma, budget and
/// letters in alphabet order, one row per line.
std::string serialize_automaton(const AnyAutomaton& automaton, std::optional<Cost> budget = std::nullopt);

const char* kind_name(const AnyAutomaton& automaton) noexcept;

} // namespace syncgame
