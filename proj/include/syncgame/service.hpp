#pragma once

// In-memory game sessions behind a small HTTP JSON API:
//
//   POST   /sessions             {automaton, human_role, strategy_mode?}
//   POST   /sessions/{id}/moves  {letter}
//   GET    /sessions/{id}
//   GET    /sessions
//   DELETE /sessions/{id}
//   GET    /builtin
//
// `automaton` is an interchange document or a builtin name such as
// "cerny:5", "duplication:4" or "qsat:psi0". Errors answer {code, message}.

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "syncgame/game.hpp"

namespace httplib {
class Server;
}

namespace syncgame::service {

using Clock = std::chrono::steady_clock;

enum class Status { in_progress, alice_won, abandoned };

const char* to_string(Status s) noexcept;

struct HistoryEntry {
    Player mover;
    Letter letter;
    StateSet coins;   // coins after the move
};

struct Config {
    std::chrono::seconds session_ttl = std::chrono::minutes(30);
    /// Finished and evicted games are appended here as JSON lines.
    std::optional<std::filesystem::path> transcript_path;
    ExactOptions exact;
    /// Largest builtin parameter accepted (cerny:n, duplication:n).
    unsigned max_builtin = 64;
};

struct Response {
    int status = 200;
    nlohmann::json body;
};

/// Resolves "cerny:n", "duplication:n" or "qsat:psi0". Throws DomainError.
Dfa builtin_automaton(const std::string& name, unsigned max_param = 64);

class GameService {
public:
    explicit GameService(Config config = {}, std::function<void(const std::string&)> log = {});
    ~GameService();

    Response create_session(const nlohmann::json& body);
    Response play_move(const std::string& id, const nlohmann::json& body);
    Response get_session(const std::string& id);
    Response list_sessions();
    Response abandon_session(const std::string& id);
    Response builtins() const;

    /// Marks sessions idle for longer than the TTL as abandoned and drops
    /// them. Returns the number evicted.
    std::size_t evict_idle(Clock::time_point now = Clock::now());

    std::size_t session_count() const;

private:
    struct Session;

    std::shared_ptr<Session> find(const std::string& id) const;
    std::shared_ptr<const GameEngine> engine_for(const Dfa& dfa, std::optional<StrategyMode> mode);
    void apply(Session& s, Player mover, Letter letter);
    void audit(const Session& s) const;
    nlohmann::json summary(const Session& s) const;
    nlohmann::json full(const Session& s) const;
    void finish(Session& s);
    void log(const std::string& line) const;

    Config config_;
    std::function<void(const std::string&)> log_;
    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mutex engines_mutex_;
    std::map<std::string, std::shared_ptr<const GameEngine>> engines_;
    mutable std::mutex transcript_mutex_;
};

/// Installs the routes on `server`. The service must outlive the server.
void register_routes(httplib::Server& server, GameService& service);

} // namespace syncgame::service
