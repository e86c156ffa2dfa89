#pragma once

#include <stdexcept>
#include <string>

namespace syncgame {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the operation's domain (state or letter out of
/// range, n too small for a construction, empty state set, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The instance exceeds a configured size cap of an exponential solver.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// A documented precondition on the relationship between inputs failed
/// (e.g. a word passed to sync_cost is not a reset word).
class ContractError : public Error {
public:
    using Error::Error;
};

/// A player strategy was requested from a position the player cannot win.
class StrategyError : public Error {
public:
    using Error::Error;
};

/// A long-running search observed a stop request.
class Cancelled : public Error {
public:
    Cancelled() : Error("search cancelled") {}
};

/// Interchange-format or DIMACS parse failure.
class ParseError : public Error {
public:
    enum class Kind {
        syntax,         // not well-formed JSON / DIMACS
        schema,         // missing field or wrong JSON type
        arity,          // row length or alphabet mismatch
        bad_cost,       // cost <= 0 or not an integer
        state_range,    // transition target >= n
        degenerate,     // structurally valid but rejected (e.g. tautological clause)
    };

    ParseError(Kind kind, std::string location, const std::string& message)
        : Error(location.empty() ? message : location + ": " + message),
          kind_(kind), location_(std::move(location)) {}

    Kind kind() const noexcept { return kind_; }
    const std::string& location() const noexcept { return location_; }

private:
    Kind kind_;
    std::string location_;
};

const char* to_string(ParseError::Kind kind) noexcept;

} // namespace syncgame
