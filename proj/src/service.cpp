#include "syncgame/service.hpp"

#include <charconv>
#include <fstream>
#include <random>

#include <httplib.h>

#include "syncgame/constructions.hpp"
#include "syncgame/interchange.hpp"

namespace syncgame::service {

using nlohmann::json;

const char* to_string(Status s) noexcept
{
    switch (s) {
    case Status::in_progress: return "IN_PROGRESS";
    case Status::alice_won: return "ALICE_WON";
    case Status::abandoned: return "ABANDONED";
    }
    return "UNKNOWN";
}

struct GameService::Session {
    std::string id;
    std::shared_ptr<const GameEngine> engine;
    std::string source;   // builtin name or "upload"
    GamePosition position;
    Player human;
    std::vector<HistoryEntry> history;
    Status status = Status::in_progress;
    Clock::time_point last_active;
    mutable std::mutex mutex;
};

namespace {

// The engine's Alice has no winning move when Bob wins; she then plays the
// letter leaving the fewest coins.
Letter engine_move(const GameEngine& engine, const GamePosition& pos)
{
    if (pos.mover == Player::bob || engine.predicted_winner() == Player::alice)
        return engine.move(pos);
    try {
        return engine.alice_move(pos);
    } catch (const StrategyError&) {
    }
    const Dfa& dfa = engine.dfa();
    Letter best = 0;
    unsigned fewest = pos.coins.size() + 1;
    for (Letter a = 0; a < dfa.letters(); ++a) {
        const unsigned size = image(dfa, pos.coins, std::span<const Letter>(&a, 1)).size();
        if (size < fewest) {
            best = a;
            fewest = size;
        }
    }
    return best;
}

Response error(int status, const std::string& code, const std::string& message)
{
    return {status, json{{"code", code}, {"message", message}}};
}

std::string new_session_id()
{
    static std::mutex m;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(m);
    static constexpr char digits[] = "0123456789abcdef";
    std::string id(16, '0');
    std::uint64_t x = rng();
    for (char& c : id) {
        c = digits[x & 0xF];
        x >>= 4;
    }
    return id;
}

unsigned parse_param(const std::string& text, const std::string& name)
{
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw DomainError("bad parameter in builtin '" + name + "'");
    return value;
}

json position_json(const GamePosition& pos)
{
    return {{"coins", pos.coins.states()}, {"mover", to_string(pos.mover)}};
}

std::optional<Player> parse_role(const json& v)
{
    if (!v.is_string())
        return std::nullopt;
    const auto s = v.get<std::string>();
    if (s == "ALICE" || s == "alice")
        return Player::alice;
    if (s == "BOB" || s == "bob")
        return Player::bob;
    return std::nullopt;
}

} // namespace

Dfa builtin_automaton(const std::string& name, unsigned max_param)
{
    const auto colon = name.find(':');
    if (colon == std::string::npos)
        throw DomainError("unknown builtin '" + name + "'");
    const std::string kind = name.substr(0, colon);
    const std::string arg = name.substr(colon + 1);
    if (kind == "qsat") {
        if (arg != "psi0")
            throw DomainError("unknown formula '" + arg + "'; only psi0 is built in");
        return eppstein_qsat(psi0());
    }
    const unsigned n = parse_param(arg, name);
    if (n > max_param)
        throw CapacityError("builtin parameter " + std::to_string(n) + " exceeds " + std::to_string(max_param));
    if (kind == "cerny")
        return cerny(n);
    if (kind == "duplication")
        return duplication(cerny(n), 1, 0);
    throw DomainError("unknown builtin '" + name + "'");
}

GameService::GameService(Config config, std::function<void(const std::string&)> log)
    : config_(std::move(config)), log_(std::move(log))
{
}

GameService::~GameService() = default;

void GameService::log(const std::string& line) const
{
    if (log_)
        log_(line);
}

std::size_t GameService::session_count() const
{
    std::shared_lock lock(sessions_mutex_);
    return sessions_.size();
}

std::shared_ptr<GameService::Session> GameService::find(const std::string& id) const
{
    std::shared_lock lock(sessions_mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::shared_ptr<const GameEngine> GameService::engine_for(const Dfa& dfa, std::optional<StrategyMode> mode)
{
    const std::string key = serialize_automaton(dfa) + (mode ? to_string(*mode) : "AUTO");
    {
        std::lock_guard lock(engines_mutex_);
        if (auto it = engines_.find(key); it != engines_.end())
            return it->second;
    }
    // Build outside the lock; a racing duplicate is harmless.
    auto engine = std::make_shared<const GameEngine>(dfa, mode, config_.exact);
    std::lock_guard lock(engines_mutex_);
    return engines_.emplace(key, std::move(engine)).first->second;
}

void GameService::apply(Session& s, Player mover, Letter letter)
{
    s.position = play(s.engine->dfa(), s.position, letter);
    s.history.push_back({mover, letter, s.position.coins});
    if (s.position.is_terminal())
        s.status = Status::alice_won;
}

void GameService::audit(const Session& s) const
{
    const Dfa& dfa = s.engine->dfa();
    StateSet coins = StateSet::full(dfa.states());
    Player mover = Player::alice;
    for (const auto& h : s.history) {
        if (h.mover != mover)
            throw std::logic_error("session " + s.id + ": history alternation broken");
        coins = image(dfa, coins, std::span<const Letter>(&h.letter, 1));
        if (coins != h.coins)
            throw std::logic_error("session " + s.id + ": history does not replay");
        mover = opponent(mover);
    }
    if (coins != s.position.coins || mover != s.position.mover)
        throw std::logic_error("session " + s.id + ": position diverges from history");
    if ((s.status == Status::alice_won) != coins.is_singleton())
        throw std::logic_error("session " + s.id + ": status inconsistent with coins");
}

json GameService::summary(const Session& s) const
{
    const Dfa& dfa = s.engine->dfa();
    const std::size_t alice_moves =
        std::count_if(s.history.begin(), s.history.end(), [](const HistoryEntry& h) { return h.mover == Player::alice; });
    return {
        {"id", s.id},
        {"source", s.source},
        {"n", dfa.states()},
        {"alphabet", dfa.alphabet()},
        {"human_role", to_string(s.human)},
        {"strategy_mode", to_string(s.engine->mode())},
        {"prediction", to_string(s.engine->predicted_winner())},
        {"position", position_json(s.position)},
        {"status", to_string(s.status)},
        {"alice_moves", alice_moves},
    };
}

json GameService::full(const Session& s) const
{
    json out = summary(s);
    const Dfa& dfa = s.engine->dfa();
    json history = json::array();
    for (const auto& h : s.history)
        history.push_back({{"mover", to_string(h.mover)}, {"letter", dfa.alphabet()[h.letter]},
                           {"coins", h.coins.states()}});
    out["history"] = std::move(history);
    out["automaton"] = json::parse(serialize_automaton(dfa));
    return out;
}

void GameService::finish(Session& s)
{
    log("session " + s.id + " " + to_string(s.status) + " after " + std::to_string(s.history.size()) + " moves");
    if (!config_.transcript_path)
        return;
    json line = full(s);
    std::lock_guard lock(transcript_mutex_);
    std::ofstream out(*config_.transcript_path, std::ios::app);
    out << line.dump() << '\n';
}

Response GameService::create_session(const json& body)
{
    evict_idle();
    if (!body.is_object())
        return error(400, "invalid_request", "body must be a JSON object");
    auto role = parse_role(body.value("human_role", json()));
    if (!role)
        return error(400, "invalid_request", "human_role must be ALICE or BOB");

    std::optional<StrategyMode> mode;
    if (auto it = body.find("strategy_mode"); it != body.end() && !it->is_null()) {
        const auto m = it->is_string() ? it->get<std::string>() : std::string();
        if (m == "EXACT" || m == "exact")
            mode = StrategyMode::exact;
        else if (m == "PAIR" || m == "pair")
            mode = StrategyMode::pair;
        else
            return error(400, "invalid_request", "strategy_mode must be EXACT or PAIR");
    }

    auto it = body.find("automaton");
    if (it == body.end())
        return error(400, "invalid_request", "missing automaton");

    auto session = std::make_shared<Session>();
    try {
        std::optional<Dfa> dfa;
        if (it->is_string()) {
            dfa = builtin_automaton(it->get<std::string>(), config_.max_builtin);
            session->source = it->get<std::string>();
        } else {
            const std::string text = it->is_object() ? it->dump() : std::string();
            if (text.empty())
                return error(400, "invalid_request", "automaton must be an interchange document or builtin name");
            auto parsed = parse_automaton(text);
            if (!std::holds_alternative<Dfa>(parsed))
                return error(400, "parse_error",
                             std::string("the game needs a complete DFA, got a ") + kind_name(parsed));
            dfa = std::get<Dfa>(std::move(parsed));
            session->source = "upload";
        }
        session->engine = engine_for(*dfa, mode);
    } catch (const ParseError& e) {
        return error(400, "parse_error", e.what());
    } catch (const CapacityError& e) {
        return error(422, "capacity", e.what());
    } catch (const DomainError& e) {
        return error(400, "invalid_request", e.what());
    }

    session->id = new_session_id();
    session->human = *role;
    session->position = GamePosition::start(session->engine->dfa().states());
    session->status = session->position.is_terminal() ? Status::alice_won : Status::in_progress;
    session->last_active = Clock::now();

    json opening = json::array();
    if (session->human == Player::bob && session->status == Status::in_progress) {
        const Letter a = engine_move(*session->engine, session->position);
        apply(*session, Player::alice, a);
        opening.push_back(
            {{"mover", "ALICE"}, {"letter", session->engine->dfa().alphabet()[a]}, {"coins", session->position.coins.states()}});
    }
    audit(*session);

    json out = summary(*session);
    out["moves"] = std::move(opening);
    {
        std::unique_lock lock(sessions_mutex_);
        sessions_.emplace(session->id, session);
    }
    log("session " + session->id + " created (" + session->source + ", human " + to_string(session->human) + ", " +
        to_string(session->engine->mode()) + ", prediction " + to_string(session->engine->predicted_winner()) + ")");
    if (session->status != Status::in_progress)
        finish(*session);
    return {201, std::move(out)};
}

Response GameService::play_move(const std::string& id, const json& body)
{
    evict_idle();
    auto session = find(id);
    if (!session)
        return error(404, "not_found", "no session '" + id + "'");
    std::lock_guard lock(session->mutex);
    Session& s = *session;
    if (s.status != Status::in_progress)
        return error(409, "session_finished", std::string("session is ") + to_string(s.status));
    if (s.position.mover != s.human)
        return error(409, "out_of_turn", std::string("it is ") + to_string(s.position.mover) + "'s turn");
    if (!body.is_object() || !body.contains("letter"))
        return error(400, "invalid_request", "body must be {\"letter\": ...}");

    const Dfa& dfa = s.engine->dfa();
    std::optional<Letter> letter;
    const json& jl = body["letter"];
    if (jl.is_string()) {
        for (Letter a = 0; a < dfa.letters(); ++a)
            if (dfa.alphabet()[a] == jl.get<std::string>())
                letter = a;
    } else if (jl.is_number_integer() && jl.get<std::int64_t>() >= 0 && jl.get<std::int64_t>() < dfa.letters()) {
        letter = static_cast<Letter>(jl.get<std::int64_t>());
    }
    if (!letter)
        return error(400, "invalid_letter", "unknown letter " + jl.dump());

    json moves = json::array();
    auto record = [&](Player mover, Letter a) {
        apply(s, mover, a);
        moves.push_back({{"mover", to_string(mover)}, {"letter", dfa.alphabet()[a]}, {"coins", s.position.coins.states()}});
    };
    record(s.human, *letter);
    if (s.status == Status::in_progress)
        record(s.position.mover, engine_move(*s.engine, s.position));
    s.last_active = Clock::now();
    audit(s);

    json out = summary(s);
    out["moves"] = std::move(moves);
    if (s.status != Status::in_progress)
        finish(s);
    return {200, std::move(out)};
}

Response GameService::get_session(const std::string& id)
{
    evict_idle();
    auto session = find(id);
    if (!session)
        return error(404, "not_found", "no session '" + id + "'");
    std::lock_guard lock(session->mutex);
    return {200, full(*session)};
}

Response GameService::list_sessions()
{
    evict_idle();
    std::vector<std::shared_ptr<Session>> snapshot;
    {
        std::shared_lock lock(sessions_mutex_);
        for (const auto& [id, s] : sessions_)
            snapshot.push_back(s);
    }
    json out = json::array();
    for (const auto& s : snapshot) {
        std::lock_guard lock(s->mutex);
        out.push_back(summary(*s));
    }
    return {200, json{{"sessions", std::move(out)}}};
}

Response GameService::abandon_session(const std::string& id)
{
    std::shared_ptr<Session> session;
    {
        std::unique_lock lock(sessions_mutex_);
        auto it = sessions_.find(id);
        if (it == sessions_.end())
            return error(404, "not_found", "no session '" + id + "'");
        session = it->second;
        sessions_.erase(it);
    }
    std::lock_guard lock(session->mutex);
    if (session->status == Status::in_progress) {
        session->status = Status::abandoned;
        finish(*session);
    }
    return {200, summary(*session)};
}

Response GameService::builtins() const
{
    json list = json::array();
    list.push_back({{"name", "cerny:n"}, {"example", "cerny:5"},
                    {"description", "Cerny automaton C_n, shortest reset word of length (n-1)^2"}});
    list.push_back({{"name", "duplication:n"}, {"example", "duplication:4"},
                    {"description", "duplication of C_n on 2n states; Alice needs (n-1)^2+1 moves"}});
    list.push_back({{"name", "qsat:psi0"}, {"example", "qsat:psi0"},
                    {"description", "QSAT gadget for the 3-variable, 4-clause formula psi0 (17 states)"}});
    return {200, json{{"builtins", std::move(list)}}};
}

std::size_t GameService::evict_idle(Clock::time_point now)
{
    std::vector<std::shared_ptr<Session>> evicted;
    {
        std::unique_lock lock(sessions_mutex_);
        for (auto it = sessions_.begin(); it != sessions_.end();) {
            std::unique_lock slock(it->second->mutex, std::try_to_lock);
            if (slock.owns_lock() && now - it->second->last_active > config_.session_ttl) {
                evicted.push_back(it->second);
                it = sessions_.erase(it);
            } else {
                ++it;
            }
        }
    }
    for (const auto& s : evicted) {
        std::lock_guard lock(s->mutex);
        if (s->status == Status::in_progress) {
            s->status = Status::abandoned;
            finish(*s);
        } else {
            log("session " + s->id + " evicted");
        }
    }
    return evicted.size();
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

void send(httplib::Response& res, const Response& r)
{
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
}

std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res)
{
    try {
        return json::parse(req.body);
    } catch (const json::parse_error& e) {
        send(res, error(400, "invalid_request", std::string("body is not JSON: ") + e.what()));
        return std::nullopt;
    }
}

} // namespace

void register_routes(httplib::Server& server, GameService& service)
{
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Post("/sessions", [&service](const httplib::Request& req, httplib::Response& res) {
        if (auto body = parse_body(req, res))
            send(res, service.create_session(*body));
    });
    server.Post(R"(/sessions/([^/]+)/moves)", [&service](const httplib::Request& req, httplib::Response& res) {
        if (auto body = parse_body(req, res))
            send(res, service.play_move(req.matches[1], *body));
    });
    server.Get(R"(/sessions/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
        send(res, service.get_session(req.matches[1]));
    });
    server.Delete(R"(/sessions/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
        send(res, service.abandon_session(req.matches[1]));
    });
    server.Get("/sessions", [&service](const httplib::Request&, httplib::Response& res) {
        send(res, service.list_sessions());
    });
    server.Get("/builtin", [&service](const httplib::Request&, httplib::Response& res) {
        send(res, service.builtins());
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        send(res, error(500, "internal", what));
    });
}

} // namespace syncgame::service
