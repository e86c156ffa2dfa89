#pragma once

// The synchronization game: Alice and Bob alternately pick letters (Alice
// first), every coin slides along its edge, coins meeting on a state merge,
// and Alice wins once a single coin remains.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "syncgame/automaton.hpp"
#include "syncgame/kernels.hpp"

namespace syncgame {

enum class Player : std::uint8_t { alice, bob };

const char* to_string(Player p) noexcept;
inline Player opponent(Player p) noexcept { return p == Player::alice ? Player::bob : Player::alice; }

struct GamePosition {
    StateSet coins;
    Player mover = Player::alice;

    /// A single coin is terminal (Alice has won) whoever is to move.
    bool is_terminal() const noexcept { return coins.is_singleton(); }

    static GamePosition start(unsigned n) { return {StateSet::full(n), Player::alice}; }

    friend bool operator==(const GamePosition&, const GamePosition&) = default;
};

/// Position after `mover` plays `a`.
GamePosition play(const Dfa& dfa, const GamePosition& pos, Letter a);

/// C(n,2)(n-2)+1: no game Alice wins takes her more moves than this.
std::uint64_t cubic_move_bound(unsigned n) noexcept;

/// Attractor of the two-coin game. Nodes are (unordered pair, mover) plus a
/// sink standing for "the two coins merged". The sink is marked; an Alice
/// node is marked when some letter leads to a marked node, a Bob node when
/// every letter does. Ranks are breadth-first marking distances from the sink
/// and strictly decrease along Alice's stored strategy.
class PairGameTable {
public:
    static constexpr std::uint32_t kUnmarked = kernels::kInfinity;

    explicit PairGameTable(const Dfa& dfa);

    unsigned states() const noexcept { return n_; }

    bool marked(State p, State q, Player mover) const;
    std::uint32_t rank(State p, State q, Player mover) const;

    /// Letter Alice plays from a marked Alice node.
    Letter alice_strategy(State p, State q) const;
    /// Letter keeping an unmarked Bob node away from the sink.
    Letter bob_escape(State p, State q) const;

    /// Every Alice node marked, i.e. Alice wins the full game.
    bool alice_wins() const noexcept { return all_alice_marked_; }

    /// Some pair inside `coins` is unmarked in the mover's layer, so Bob wins
    /// by defending that pair alone. The converse only holds globally: when
    /// alice_wins(), Alice wins from every position. Requires n <= 64.
    bool bob_wins_from(std::uint64_t coins, Player mover) const;

    /// Number of marked nodes, sink included.
    std::size_t marked_count() const noexcept { return marked_count_; }

private:
    std::size_t node(State p, State q, Player mover) const;

    unsigned n_;
    unsigned k_;
    std::size_t pairs_;
    std::vector<std::uint32_t> rank_;     // per node, kUnmarked if unmarked
    std::vector<std::uint32_t> move_;     // Alice: strategy letter; Bob: escape letter
    bool all_alice_marked_ = false;
    std::size_t marked_count_ = 0;
};

struct WinnerDecision {
    Player winner;
    PairGameTable table;
};

/// O(n^2 k) winner decision on the pair game.
WinnerDecision decide_winner(const Dfa& dfa);

struct ExactOptions {
    /// Largest automaton accepted by the full power-set solver.
    unsigned max_states = 20;
    /// Use the OpenMP kernels instead of the serial references.
    bool parallel = true;
};

/// Exact Alice-move counts for every position of the full game.
class GameValueTable {
public:
    static constexpr std::uint32_t kInfinity = kernels::kInfinity;

    GameValueTable(const Dfa& dfa, const ExactOptions& options = {});

    unsigned states() const noexcept { return n_; }

    /// Alice moves needed against optimal Bob, kInfinity when Bob wins.
    std::uint32_t value(const GamePosition& pos) const;
    std::uint32_t start_value() const { return value(GamePosition::start(n_)); }

    /// Alice: least letter reaching the smallest value. Bob: least letter
    /// reaching the largest value (a Bob-winning successor when one exists).
    Letter best_move(const GamePosition& pos) const;

    const kernels::GameValues& raw() const noexcept { return values_; }

private:
    std::uint32_t index(const GamePosition& pos) const;

    unsigned n_;
    kernels::GameValues values_;
    kernels::BestMoves moves_;
};

GameValueTable optimal_moves(const Dfa& dfa, const ExactOptions& options = {});

/// Which moves the budget of a short game counts.
enum class MoveCounting : std::uint8_t {
    /// Only Alice's moves (each Alice move and Bob's reply cost one unit).
    alice_moves,
    /// Every half-move of either player.
    all_moves,
};

struct ShortGameOptions {
    MoveCounting counting = MoveCounting::alice_moves;
    unsigned max_states = 20;
};

/// Can Alice force a win within `moves` moves? Memoised on (set, moves left,
/// side). Budgets at or beyond the cubic bound are answered by the pair game.
bool short_game_decide(const Dfa& dfa, std::uint64_t moves, const ShortGameOptions& options = {});

/// Same contract, evaluated by an explicit depth-first unfolding that keeps
/// only the current path (one frame per half-move) and no memo table.
bool short_game_decide_lowmem(const Dfa& dfa, std::uint64_t moves, const ShortGameOptions& options = {});

enum class StrategyMode : std::uint8_t { exact, pair };

const char* to_string(StrategyMode mode) noexcept;

/// Move selection for both players. Exact mode consults the full value table;
/// pair mode composes two-coin strategies and scales to 64 states.
class GameEngine {
public:
    /// Picks exact mode when n fits `exact.max_states`, pair mode otherwise.
    explicit GameEngine(Dfa dfa, std::optional<StrategyMode> mode = std::nullopt, const ExactOptions& exact = {});

    const Dfa& dfa() const noexcept { return dfa_; }
    StrategyMode mode() const noexcept { return mode_; }
    Player predicted_winner() const noexcept { return pairs_.alice_wins() ? Player::alice : Player::bob; }
    const PairGameTable& pair_table() const noexcept { return pairs_; }
    const GameValueTable* value_table() const noexcept { return values_.get(); }

    /// Winning letter for Alice. Throws StrategyError when Bob wins from pos.
    Letter alice_move(const GamePosition& pos) const;

    /// A Bob-winning letter when one exists, otherwise the letter that delays
    /// Alice the longest.
    Letter bob_move(const GamePosition& pos) const;

    Letter move(const GamePosition& pos) const
    {
        return pos.mover == Player::alice ? alice_move(pos) : bob_move(pos);
    }

private:
    void check_position(const GamePosition& pos, Player expected) const;

    Dfa dfa_;
    StrategyMode mode_;
    PairGameTable pairs_;
    std::unique_ptr<const GameValueTable> values_;
};

/// Replays Bob's scripted defence on the Cerny automaton C_n (always a,
/// except b when the two tracked coins sit on {n-2, 0} or {0, 2}) against
/// every Alice reply. True iff the tracked coins can never merge.
bool verify_bob_cerny_strategy(unsigned n);

} // namespace syncgame
