#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>

#include "syncgame/constructions.hpp"
#include "syncgame/interchange.hpp"
#include "syncgame/service.hpp"

using namespace syncgame;
using namespace syncgame::service;
using nlohmann::json;

namespace {

json create(GameService& svc, const json& automaton, const char* role, int expect = 201)
{
    const Response r = svc.create_session({{"automaton", automaton}, {"human_role", role}});
    REQUIRE(r.status == expect);
    return r.body;
}

std::size_t count_alice(const json& history)
{
    std::size_t n = 0;
    for (const auto& h : history)
        n += h["mover"] == "ALICE";
    return n;
}

// Replays the history through the automaton document in the full session.
bool history_replays(const json& session)
{
    const Dfa dfa = std::get<Dfa>(parse_automaton(session["automaton"].dump()));
    StateSet coins = StateSet::full(dfa.states());
    for (const auto& h : session["history"]) {
        const Word w = parse_word(dfa.alphabet(), h["letter"].get<std::string>());
        coins = image(dfa, coins, w);
        if (coins.states() != h["coins"].get<std::vector<State>>())
            return false;
    }
    return coins.states() == session["position"]["coins"].get<std::vector<State>>();
}

} // namespace

TEST_CASE("builtins")
{
    CHECK(builtin_automaton("cerny:4") == cerny(4));
    CHECK(builtin_automaton("duplication:3").states() == 6);
    CHECK(builtin_automaton("qsat:psi0").states() == 17);
    CHECK_THROWS_AS(builtin_automaton("cerny"), DomainError);
    CHECK_THROWS_AS(builtin_automaton("cerny:x"), DomainError);
    CHECK_THROWS_AS(builtin_automaton("qsat:psi1"), DomainError);
    CHECK_THROWS_AS(builtin_automaton("cerny:100", 64), CapacityError);
    GameService svc;
    CHECK(svc.builtins().body["builtins"][0]["name"] == "cerny:n");
}

TEST_CASE("create: predictions and opening move")
{
    GameService svc;
    auto s = create(svc, "cerny:5", "BOB");
    CHECK(s["prediction"] == "BOB");
    CHECK(s["strategy_mode"] == "EXACT");
    CHECK(s["position"]["mover"] == "BOB");
    CHECK(s["moves"].size() == 1);

    s = create(svc, "cerny:2", "BOB");
    CHECK(s["prediction"] == "ALICE");
    CHECK(s["status"] == "ALICE_WON");
    CHECK(s["position"]["coins"] == json::array({1}));

    s = create(svc, "cerny:4", "ALICE");
    CHECK(s["position"]["coins"] == json::array({0, 1, 2, 3}));
    CHECK(s["position"]["mover"] == "ALICE");
    CHECK(s["moves"].empty());
    const auto full = svc.get_session(s["id"]);
    CHECK(full.body["history"].empty());

    const json doc = json::parse(serialize_automaton(cerny(3)));
    s = create(svc, doc, "alice");
    CHECK(s["source"] == "upload");
    s = svc.create_session({{"automaton", "cerny:30"}, {"human_role", "ALICE"}, {"strategy_mode", "PAIR"}}).body;
    CHECK(s["strategy_mode"] == "PAIR");
    CHECK(svc.session_count() == 5);
}

TEST_CASE("create: errors")
{
    GameService svc;
    CHECK(svc.create_session({{"automaton", {{"n", 2}}}, {"human_role", "ALICE"}}).body["code"] == "parse_error");
    CHECK(svc.create_session({{"automaton", "cerny:4"}, {"human_role", "CAROL"}}).status == 400);
    CHECK(svc.create_session({{"automaton", "bogus:4"}, {"human_role", "ALICE"}}).status == 400);
    CHECK(svc.create_session({{"automaton", "cerny:99"}, {"human_role", "ALICE"}}).status == 422);
    CHECK(svc.create_session(json::array()).status == 400);
    const json pfa = json::parse(serialize_automaton(Pfa(2, 1, {1, kUndefined})));
    CHECK(svc.create_session({{"automaton", pfa}, {"human_role", "ALICE"}}).body["code"] == "parse_error");
    CHECK(svc.session_count() == 0);
}

TEST_CASE("play: duplication with Bob always replying b")
{
    for (unsigned n : {3U, 4U}) {
        GameService svc;
        auto s = create(svc, "duplication:" + std::to_string(n), "BOB");
        const std::string id = s["id"];
        while (s["status"] == "IN_PROGRESS") {
            const Response r = svc.play_move(id, {{"letter", "b"}});
            REQUIRE(r.status == 200);
            s = r.body;
        }
        const auto full = svc.get_session(id).body;
        CHECK(full["status"] == "ALICE_WON");
        CHECK(count_alice(full["history"]) == (n - 1) * (n - 1) + 1);
        CHECK(full["alice_moves"] == (n - 1) * (n - 1) + 1);
        CHECK(history_replays(full));
    }
}

TEST_CASE("play: errors")
{
    GameService svc;
    auto s = create(svc, "cerny:4", "ALICE");
    const std::string id = s["id"];
    CHECK(svc.play_move(id, {{"letter", "z"}}).body["code"] == "invalid_letter");
    CHECK(svc.play_move(id, {{"letter", 7}}).body["code"] == "invalid_letter");
    CHECK(svc.play_move(id, json::object()).body["code"] == "invalid_request");
    CHECK(svc.play_move("nope", {{"letter", "a"}}).status == 404);
    CHECK(svc.get_session("nope").body["code"] == "not_found");

    const auto r = svc.play_move(id, {{"letter", 0}});
    CHECK(r.status == 200);
    CHECK(r.body["moves"].size() == 2);
    CHECK(svc.get_session(id).body["history"].size() == 2);

    auto won = create(svc, "cerny:2", "BOB");
    CHECK(svc.play_move(won["id"], {{"letter", "a"}}).body["code"] == "session_finished");

    auto bob = create(svc, "cerny:3", "ALICE");
    CHECK(svc.play_move(bob["id"], {{"letter", "a"}}).status == 200);
}

TEST_CASE("turn returns to the human after every exchange")
{
    GameService svc;
    for (const char* role : {"ALICE", "BOB"}) {
        auto s = create(svc, "duplication:3", role);
        for (int i = 0; i < 40 && s["status"] == "IN_PROGRESS"; ++i) {
            CHECK(s["position"]["mover"] == role);
            const auto r = svc.play_move(s["id"], {{"letter", "b"}});
            REQUIRE(r.status == 200);
            s = r.body;
        }
    }
}

TEST_CASE("Bob engine holds when prediction is BOB")
{
    GameService svc;
    auto s = create(svc, "cerny:5", "ALICE");
    const std::string id = s["id"];
    std::mt19937_64 rng(3);
    for (int i = 0; i < 4 * 4 * 4 * 4 * 4 / 2; ++i) {
        const auto r = svc.play_move(id, {{"letter", (rng() & 1) ? "a" : "b"}});
        REQUIRE(r.status == 200);
        CHECK(r.body["status"] == "IN_PROGRESS");
        CHECK(r.body["position"]["coins"].size() >= 2);
    }
    CHECK(history_replays(svc.get_session(id).body));
}

TEST_CASE("list, abandon, evict, transcripts")
{
    const auto path = std::filesystem::temp_directory_path() / "syncgame_transcripts_test.ndjson";
    std::filesystem::remove(path);
    Config config;
    config.session_ttl = std::chrono::seconds(60);
    config.transcript_path = path;
    std::vector<std::string> lines;
    GameService svc(config, [&lines](const std::string& l) { lines.push_back(l); });

    auto a = create(svc, "cerny:4", "ALICE");
    auto b = create(svc, "cerny:3", "ALICE");
    CHECK(svc.list_sessions().body["sessions"].size() == 2);

    CHECK(svc.abandon_session(a["id"]).body["status"] == "ABANDONED");
    CHECK(svc.abandon_session(a["id"]).status == 404);
    CHECK(svc.evict_idle(Clock::now()) == 0);
    CHECK(svc.evict_idle(Clock::now() + std::chrono::minutes(2)) == 1);
    CHECK(svc.session_count() == 0);
    CHECK(svc.get_session(b["id"]).status == 404);

    std::ifstream in(path);
    std::string line;
    std::vector<json> transcripts;
    while (std::getline(in, line))
        transcripts.push_back(json::parse(line));
    REQUIRE(transcripts.size() == 2);
    CHECK(transcripts[0]["status"] == "ABANDONED");
    CHECK(transcripts[1]["id"] == b["id"]);
    CHECK(lines.size() >= 4);
    std::filesystem::remove(path);
}

TEST_CASE("HTTP round trip")
{
    GameService svc;
    httplib::Server server;
    register_routes(server, svc);
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto builtin = client.Get("/builtin");
    REQUIRE(builtin);
    CHECK(builtin->status == 200);
    CHECK(builtin->body.find("cerny:n") != std::string::npos);

    auto created = client.Post("/sessions", R"({"automaton": "duplication:3", "human_role": "BOB"})",
                               "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    const json s = json::parse(created->body);
    const std::string id = s["id"];

    std::string status = s["status"];
    while (status == "IN_PROGRESS") {
        auto moved = client.Post("/sessions/" + id + "/moves", R"({"letter": "b"})", "application/json");
        REQUIRE(moved);
        REQUIRE(moved->status == 200);
        status = json::parse(moved->body)["status"];
    }
    auto got = client.Get("/sessions/" + id);
    REQUIRE(got);
    const json full = json::parse(got->body);
    CHECK(full["status"] == "ALICE_WON");
    CHECK(count_alice(full["history"]) == 5);

    auto listed = client.Get("/sessions");
    REQUIRE(listed);
    CHECK(json::parse(listed->body)["sessions"].size() == 1);

    auto bad = client.Post("/sessions", "{not json", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);
    CHECK(json::parse(bad->body)["code"] == "invalid_request");
    auto missing = client.Get("/sessions/unknown");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    auto finished = client.Post("/sessions/" + id + "/moves", R"({"letter": "b"})", "application/json");
    REQUIRE(finished);
    CHECK(finished->status == 409);

    server.stop();
    worker.join();
}
