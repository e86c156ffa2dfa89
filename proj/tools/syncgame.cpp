// syncgame: batch analysis, game solving, generators and the game server.
//
// Exit codes: 0 success (ALICE / within budget), 2 not synchronizing,
// 3 BOB wins or over budget, 1 any error.

#include <csignal>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "syncgame/analysis.hpp"
#include "syncgame/constructions.hpp"
#include "syncgame/game.hpp"
#include "syncgame/interchange.hpp"
#include "syncgame/service.hpp"
#include "syncgame/weighted.hpp"

using namespace syncgame;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNotSynchronizing = 2;
constexpr int kNegative = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path)
{
    if (path == "-")
        return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), {}};
}

const std::vector<std::string>& alphabet_of(const AnyAutomaton& a)
{
    return std::visit([](const auto& x) -> const std::vector<std::string>& {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Dwa>)
            return x.dfa().alphabet();
        else
            return x.alphabet();
    }, a);
}

const Dfa& require_dfa(const AnyAutomaton& a)
{
    if (const auto* d = std::get_if<Dfa>(&a))
        return *d;
    if (const auto* w = std::get_if<Dwa>(&a))
        return w->dfa();
    throw UsageError("this command needs a complete automaton, got a pfa");
}

json word_json(const std::vector<std::string>& alphabet, const Word& w)
{
    return format_word(alphabet, w);
}

// Human output is a list of "key: value" lines mirroring the JSON fields.
void emit(const json& report, bool as_json)
{
    if (as_json) {
        std::cout << report.dump(2) << '\n';
        return;
    }
    for (const auto& [key, value] : report.items()) {
        std::cout << key << ": ";
        if (value.is_string())
            std::cout << value.get<std::string>();
        else if (value.is_null())
            std::cout << "-";
        else
            std::cout << value.dump();
        std::cout << '\n';
    }
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string file;
    bool weighted = false;
    std::optional<std::string> word;
};

int cmd_analyze(const AnalyzeArgs& args, bool as_json)
{
    const Document doc = parse_document(read_input(args.file));
    const auto& alphabet = alphabet_of(doc.automaton);
    json report;
    report["kind"] = kind_name(doc.automaton);

    bool synchronizing = false;
    if (const auto* pfa = std::get_if<Pfa>(&doc.automaton)) {
        report["n"] = pfa->states();
        const auto r = careful_shortest_word(*pfa);
        synchronizing = r.synchronizing;
        report["careful"] = true;
        report["synchronizing"] = r.synchronizing;
        report["length"] = r.shortest_word ? json(r.shortest_word->size()) : json();
        report["word"] = r.shortest_word ? word_json(alphabet, *r.shortest_word) : json();
        if (args.word) {
            const Word w = parse_word(alphabet, *args.word);
            report["query_word"] = format_word(alphabet, w);
            report["query_resets"] = is_careful_reset_word(*pfa, w);
        }
        if (args.weighted)
            throw UsageError("--weighted needs a weighted automaton");
    } else {
        const Dfa& dfa = require_dfa(doc.automaton);
        report["n"] = dfa.states();
        const auto r = shortest_reset_word(dfa);
        synchronizing = r.synchronizing;
        report["synchronizing"] = r.synchronizing;
        report["length"] = r.shortest_word ? json(r.shortest_word->size()) : json();
        report["word"] = r.shortest_word ? word_json(alphabet, *r.shortest_word) : json();
        if (args.word) {
            const Word w = parse_word(alphabet, *args.word);
            report["query_word"] = format_word(alphabet, w);
            report["query_resets"] = image(dfa, StateSet::full(dfa.states()), w).is_singleton();
        }
        if (args.weighted) {
            const auto* dwa = std::get_if<Dwa>(&doc.automaton);
            if (!dwa)
                throw UsageError("--weighted needs a weighted automaton");
            if (args.word) {
                report["cost"] = sync_cost(*dwa, parse_word(alphabet, *args.word));
            } else {
                const auto best = min_sync_cost(*dwa);
                report["min_cost"] = best ? json(*best) : json();
            }
        }
    }
    emit(report, as_json);
    return synchronizing ? kOk : kNotSynchronizing;
}

struct GameArgs {
    std::string file;
    bool optimal = false;
    std::optional<std::uint64_t> short_moves;
    MoveCounting counting = MoveCounting::alice_moves;
    unsigned max_states = 20;
};

int cmd_game(const GameArgs& args, bool as_json)
{
    const Document doc = parse_document(read_input(args.file));
    const Dfa& dfa = require_dfa(doc.automaton);
    const auto decision = decide_winner(dfa);
    json report;
    report["n"] = dfa.states();
    report["winner"] = to_string(decision.winner);
    report["cubic_bound"] = cubic_move_bound(dfa.states());
    int code = decision.winner == Player::alice ? kOk : kNegative;

    if (args.optimal) {
        ExactOptions opts;
        opts.max_states = args.max_states;
        const auto table = optimal_moves(dfa, opts);
        const auto v = table.start_value();
        report["optimal_moves"] = v == GameValueTable::kInfinity ? json() : json(v);
        if (v != GameValueTable::kInfinity && dfa.states() > 1)
            report["opening"] = dfa.alphabet()[table.best_move(GamePosition::start(dfa.states()))];
    }
    if (args.short_moves) {
        ShortGameOptions opts;
        opts.counting = args.counting;
        opts.max_states = args.max_states;
        const bool win = short_game_decide(dfa, *args.short_moves, opts);
        report["short_moves"] = *args.short_moves;
        report["counting"] = args.counting == MoveCounting::alice_moves ? "alice" : "all";
        report["wins_within"] = win;
        code = win ? kOk : kNegative;
    }
    emit(report, as_json);
    return code;
}

struct BudgetArgs {
    std::string file;
    std::optional<Cost> budget;
    bool game = false;
};

int cmd_budget(const BudgetArgs& args, bool as_json)
{
    const Document doc = parse_document(read_input(args.file));
    const auto* dwa = std::get_if<Dwa>(&doc.automaton);
    if (!dwa)
        throw UsageError(std::string("budget needs a weighted automaton, got a ") + kind_name(doc.automaton));
    const auto budget = args.budget ? args.budget : doc.budget;
    if (!budget)
        throw UsageError("no budget given and the document has none");

    json report;
    report["budget"] = *budget;
    bool yes = false;
    if (args.game) {
        yes = game_on_budget(*dwa, *budget);
        report["game"] = true;
        report["alice_wins_within_budget"] = yes;
    } else {
        const auto r = budget_decide({*dwa, *budget});
        yes = r.within_budget;
        report["within_budget"] = r.within_budget;
        report["witness"] = r.witness ? word_json(dwa->dfa().alphabet(), *r.witness) : json();
        report["witness_cost"] = r.witness_cost ? json(*r.witness_cost) : json();
        if (r.witness_truncated)
            report["witness_truncated"] = true;
    }
    emit(report, as_json);
    return yes ? kOk : kNegative;
}

struct GenerateArgs {
    std::string kind;
    std::vector<std::string> params;
    std::optional<std::string> from;
    std::string letter = "b";
    State q0 = 0;
    bool pad_odd = false;
    std::uint64_t seed = 1;
    std::string random_kind = "dfa";
    Cost max_cost = 4;
};

unsigned param_uint(const GenerateArgs& args, std::size_t i, const char* what)
{
    if (args.params.size() <= i)
        throw UsageError(std::string("missing ") + what);
    try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(args.params[i], &used);
        if (used != args.params[i].size() || v > 1'000'000)
            throw std::invalid_argument("range");
        return static_cast<unsigned>(v);
    } catch (const std::logic_error&) {
        throw UsageError(std::string("bad ") + what + " '" + args.params[i] + "'");
    }
}

AnyAutomaton random_automaton(unsigned n, unsigned k, const GenerateArgs& args)
{
    if (n == 0 || k == 0)
        throw UsageError("random automata need n >= 1 and k >= 1");
    std::mt19937_64 rng(args.seed);
    std::uniform_int_distribution<State> target(0, n - 1);
    std::vector<State> table(static_cast<std::size_t>(n) * k);
    for (auto& t : table)
        t = target(rng);
    if (args.random_kind == "dfa")
        return Dfa(n, k, std::move(table));
    if (args.random_kind == "pfa") {
        std::bernoulli_distribution hole(0.2);
        for (auto& t : table)
            if (hole(rng))
                t = kUndefined;
        return Pfa(n, k, std::move(table));
    }
    if (args.random_kind == "dwa") {
        if (args.max_cost < 1)
            throw UsageError("--max-cost must be positive");
        std::uniform_int_distribution<Cost> cost(1, args.max_cost);
        std::vector<Cost> costs(table.size());
        for (auto& c : costs)
            c = cost(rng);
        return Dwa(Dfa(n, k, std::move(table)), std::move(costs));
    }
    throw UsageError("--type must be dfa, pfa or dwa");
}

int cmd_generate(const GenerateArgs& args)
{
    std::optional<Cost> budget;
    AnyAutomaton out = Dfa(1, 1, {0});
    if (args.kind == "cerny") {
        out = cerny(param_uint(args, 0, "n"));
    } else if (args.kind == "duplication") {
        Dfa base = args.from ? require_dfa(parse_automaton(read_input(*args.from))) : cerny(param_uint(args, 0, "n"));
        const auto& names = base.alphabet();
        const auto it = std::find(names.begin(), names.end(), args.letter);
        if (it == names.end())
            throw UsageError("letter '" + args.letter + "' is not in the alphabet");
        out = duplication(base, static_cast<Letter>(it - names.begin()), args.q0, args.pad_odd);
    } else if (args.kind == "qsat") {
        if (args.params.empty())
            throw UsageError("missing CNF file (or psi0)");
        const CnfFormula f = args.params[0] == "psi0" ? psi0() : parse_dimacs(read_input(args.params[0]));
        out = eppstein_qsat(f);
    } else if (args.kind == "pfa2dwa") {
        if (args.params.empty())
            throw UsageError("missing automaton file");
        const auto parsed = parse_automaton(read_input(args.params[0]));
        const Pfa pfa = std::visit([](const auto& x) -> Pfa {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Pfa>)
                return x;
            else if constexpr (std::is_same_v<T, Dfa>)
                return Pfa(x);
            else
                throw UsageError("pfa2dwa needs an unweighted automaton");
        }, parsed);
        auto instance = pfa_to_dwa(pfa);
        out = std::move(instance.dwa);
        budget = instance.budget;
    } else if (args.kind == "random") {
        out = random_automaton(param_uint(args, 0, "n"), param_uint(args, 1, "k"), args);
    } else {
        throw UsageError("unknown generator '" + args.kind + "' (cerny, duplication, qsat, pfa2dwa, random)");
    }
    std::cout << serialize_automaton(out, budget);
    return kOk;
}

struct ServeArgs {
    std::string host = "0.0.0.0";
    int port = 8080;
    unsigned ttl_minutes = 30;
    std::optional<std::string> transcripts;
    unsigned exact_cap = 20;
};

httplib::Server* g_server = nullptr;

extern "C" void on_signal(int)
{
    if (g_server)
        g_server->stop();
}

int cmd_serve(const ServeArgs& args)
{
    service::Config config;
    config.session_ttl = std::chrono::minutes(args.ttl_minutes);
    if (args.transcripts)
        config.transcript_path = *args.transcripts;
    config.exact.max_states = args.exact_cap;

    std::mutex log_mutex;
    service::GameService svc(config, [&log_mutex](const std::string& line) {
        std::lock_guard lock(log_mutex);
        std::clog << line << std::endl;
    });
    httplib::Server server;
    // No SO_REUSEPORT, so a second server on a busy port fails to bind.
    server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });
    service::register_routes(server, svc);
    if (!server.bind_to_port(args.host, args.port)) {
        std::cerr << "error: cannot listen on " << args.host << ":" << args.port << '\n';
        return kError;
    }
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    std::jthread reaper([&svc](std::stop_token stop) {
        while (!stop.stop_requested()) {
            for (int i = 0; i < 60 && !stop.stop_requested(); ++i)
                std::this_thread::sleep_for(std::chrono::seconds(1));
            svc.evict_idle();
        }
    });
    std::clog << "listening on " << args.host << ":" << args.port << std::endl;
    server.listen_after_bind();
    g_server = nullptr;
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Synchronizing automata: reset words, the synchronization game and budgets"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "Emit JSON instead of text");

    AnalyzeArgs analyze;
    auto* a = app.add_subcommand("analyze", "Reset words (careful ones for partial automata)");
    a->add_option("file", analyze.file, "Interchange document or - for stdin")->required();
    a->add_flag("--weighted", analyze.weighted, "Synchronization cost (of --word, else the minimum)");
    a->add_option("--word", analyze.word, "Word to check, e.g. aabab");

    GameArgs game;
    auto* g = app.add_subcommand("game", "Winner of the synchronization game (exit 0 ALICE, 3 BOB)");
    g->add_option("file", game.file, "Interchange document or -")->required();
    g->add_flag("--optimal", game.optimal, "Exact number of Alice moves");
    g->add_option("--short", game.short_moves, "Decide whether Alice wins within this many moves");
    g->add_option("--counting", game.counting, "What --short counts: alice (her moves) or all (half-moves)")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, MoveCounting>{{"alice", MoveCounting::alice_moves}, {"all", MoveCounting::all_moves}}));
    g->add_option("--max-states", game.max_states, "State cap of the exact solvers")->capture_default_str();

    BudgetArgs budget;
    auto* b = app.add_subcommand("budget", "Reset word within a cost budget (exit 0 yes, 3 no)");
    b->add_option("file", budget.file, "Weighted interchange document or -")->required();
    b->add_option("B", budget.budget, "Budget (defaults to the document's budget field)");
    b->add_flag("--game", budget.game, "Decide the synchronization game on budget instead");

    GenerateArgs gen;
    auto* gn = app.add_subcommand("generate", "Print a construction as an interchange document");
    gn->add_option("generator", gen.kind, "cerny | duplication | qsat | pfa2dwa | random")->required();
    gn->add_option("params", gen.params, "n | file.cnf | psi0 | file.json | n k");
    gn->add_option("--from", gen.from, "duplication: base automaton file instead of C_n");
    gn->add_option("--letter", gen.letter, "duplication: the letter b")->capture_default_str();
    gn->add_option("--q0", gen.q0, "duplication: the state q0")->capture_default_str();
    gn->add_flag("--pad-odd", gen.pad_odd, "duplication: add one extra state");
    gn->add_option("--seed", gen.seed, "random: seed")->capture_default_str();
    gn->add_option("--type", gen.random_kind, "random: dfa | pfa | dwa")->capture_default_str();
    gn->add_option("--max-cost", gen.max_cost, "random: largest transition cost")->capture_default_str();

    ServeArgs serve;
    auto* s = app.add_subcommand("serve", "Run the HTTP game service");
    s->add_option("--host", serve.host)->capture_default_str();
    s->add_option("--port", serve.port)->check(CLI::Range(1, 65535))->capture_default_str();
    s->add_option("--session-ttl", serve.ttl_minutes, "Idle minutes before a session is evicted")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s->add_option("--transcripts", serve.transcripts, "Append finished games to this ndjson file");
    s->add_option("--exact-cap", serve.exact_cap, "Largest n solved exactly")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kError;
    }

    try {
        if (*a)
            return cmd_analyze(analyze, as_json);
        if (*g)
            return cmd_game(game, as_json);
        if (*b)
            return cmd_budget(budget, as_json);
        if (*gn)
            return cmd_generate(gen);
        if (*s)
            return cmd_serve(serve);
    } catch (const ParseError& e) {
        std::cerr << "parse error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return kError;
}
