#include "syncgame/game.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>
#include <unordered_map>

#include "syncgame/constructions.hpp"
#include "syncgame/detail/pairs.hpp"

namespace syncgame {

using detail::pair_count;
using detail::pair_index;

const char* to_string(Player p) noexcept
{
    return p == Player::alice ? "ALICE" : "BOB";
}

const char* to_string(StrategyMode mode) noexcept
{
    return mode == StrategyMode::exact ? "EXACT" : "PAIR";
}

GamePosition play(const Dfa& dfa, const GamePosition& pos, Letter a)
{
    return {image(dfa, pos.coins, std::span<const Letter>(&a, 1)), opponent(pos.mover)};
}

std::uint64_t cubic_move_bound(unsigned n) noexcept
{
    if (n < 2)
        return 0;
    return static_cast<std::uint64_t>(pair_count(n)) * (n - 2) + 1;
}

// ---------------------------------------------------------------------------
// Pair game

PairGameTable::PairGameTable(const Dfa& dfa) : n_(dfa.states()), k_(dfa.letters()), pairs_(pair_count(n_))
{
    // Node layout: Alice nodes [0, pairs), Bob nodes [pairs, 2 pairs), sink 2 pairs.
    const std::size_t nodes = 2 * pairs_ + 1;
    const std::size_t sink = 2 * pairs_;
    rank_.assign(nodes, kUnmarked);
    move_.assign(2 * pairs_, 0);

    std::vector<std::size_t> succ(2 * pairs_ * k_);
    std::vector<std::size_t> offset(nodes + 1, 0);
    for (State q = 1; q < n_; ++q) {
        for (State p = 0; p < q; ++p) {
            const std::size_t i = pair_index(p, q);
            for (Letter a = 0; a < k_; ++a) {
                const State pa = dfa.next(p, a), qa = dfa.next(q, a);
                const std::size_t target = pa == qa ? pairs_ : pair_index(pa, qa);
                // Alice node i -> Bob layer, Bob node -> Alice layer.
                succ[i * k_ + a] = target == pairs_ ? sink : pairs_ + target;
                succ[(pairs_ + i) * k_ + a] = target == pairs_ ? sink : target;
            }
        }
    }
    for (std::size_t e = 0; e < succ.size(); ++e)
        ++offset[succ[e] + 1];
    for (std::size_t v = 0; v < nodes; ++v)
        offset[v + 1] += offset[v];
    std::vector<std::size_t> preds(succ.size());
    {
        std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
        for (std::size_t e = 0; e < succ.size(); ++e)
            preds[fill[succ[e]]++] = e;
    }

    std::vector<std::uint32_t> remaining(pairs_, k_);
    std::deque<std::size_t> queue{sink};
    rank_[sink] = 0;
    marked_count_ = 1;
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t e = offset[v]; e < offset[v + 1]; ++e) {
            const std::size_t edge = preds[e];
            const std::size_t u = edge / k_;
            if (rank_[u] != kUnmarked)
                continue;
            if (u < pairs_) {
                move_[u] = static_cast<std::uint32_t>(edge % k_);
            } else if (--remaining[u - pairs_] != 0) {
                continue;
            }
            rank_[u] = rank_[v] + 1;
            ++marked_count_;
            queue.push_back(u);
        }
    }

    all_alice_marked_ = true;
    for (std::size_t i = 0; i < pairs_; ++i)
        all_alice_marked_ = all_alice_marked_ && rank_[i] != kUnmarked;

    for (std::size_t i = 0; i < pairs_; ++i) {
        const std::size_t u = pairs_ + i;
        if (rank_[u] != kUnmarked)
            continue;
        for (Letter a = 0; a < k_; ++a) {
            const std::size_t t = succ[u * k_ + a];
            if (t != sink && rank_[t] == kUnmarked) {
                move_[u] = a;
                break;
            }
        }
    }
}

std::size_t PairGameTable::node(State p, State q, Player mover) const
{
    if (p >= n_ || q >= n_ || p == q)
        throw DomainError("pair game nodes need two distinct states");
    return pair_index(p, q) + (mover == Player::bob ? pairs_ : 0);
}

bool PairGameTable::marked(State p, State q, Player mover) const
{
    return rank_[node(p, q, mover)] != kUnmarked;
}

std::uint32_t PairGameTable::rank(State p, State q, Player mover) const
{
    return rank_[node(p, q, mover)];
}

Letter PairGameTable::alice_strategy(State p, State q) const
{
    const std::size_t u = node(p, q, Player::alice);
    if (rank_[u] == kUnmarked)
        throw StrategyError("Bob wins the pair {" + std::to_string(p) + "," + std::to_string(q) + "}");
    return move_[u];
}

Letter PairGameTable::bob_escape(State p, State q) const
{
    const std::size_t u = node(p, q, Player::bob);
    if (rank_[u] != kUnmarked)
        throw StrategyError("Alice wins the pair {" + std::to_string(p) + "," + std::to_string(q) + "}");
    return move_[u];
}

bool PairGameTable::bob_wins_from(std::uint64_t coins, Player mover) const
{
    const std::size_t base = mover == Player::bob ? pairs_ : 0;
    for (std::uint64_t a = coins; a != 0; a &= a - 1) {
        const auto q = static_cast<State>(std::countr_zero(a));
        for (std::uint64_t b = coins & ((std::uint64_t{1} << q) - 1); b != 0; b &= b - 1)
            if (rank_[base + pair_index(static_cast<State>(std::countr_zero(b)), q)] == kUnmarked)
                return true;
    }
    return false;
}

WinnerDecision decide_winner(const Dfa& dfa)
{
    PairGameTable table(dfa);
    const Player winner = table.alice_wins() ? Player::alice : Player::bob;
    return {winner, std::move(table)};
}

// ---------------------------------------------------------------------------
// Full game

GameValueTable::GameValueTable(const Dfa& dfa, const ExactOptions& options) : n_(dfa.states())
{
    if (n_ > options.max_states || n_ > kernels::kDenseMaxStates)
        throw CapacityError("exact game solver is capped at " +
                            std::to_string(std::min(options.max_states, kernels::kDenseMaxStates)) + " states, got " +
                            std::to_string(n_));
    if (options.parallel) {
        const auto table = kernels::build_image_table_parallel(dfa);
        values_ = kernels::solve_values_parallel(table);
        moves_ = kernels::best_moves_parallel(table, values_);
    } else {
        const auto table = kernels::build_image_table_serial(dfa);
        values_ = kernels::solve_values_serial(table);
        moves_ = kernels::best_moves_serial(table, values_);
    }
}

std::uint32_t GameValueTable::index(const GamePosition& pos) const
{
    if (pos.coins.width() != n_)
        throw DomainError("position width does not match the automaton");
    if (pos.coins.empty())
        throw DomainError("a game position needs at least one coin");
    return static_cast<std::uint32_t>(pos.coins.bits());
}

std::uint32_t GameValueTable::value(const GamePosition& pos) const
{
    const auto i = index(pos);
    return pos.mover == Player::alice ? values_.alice[i] : values_.bob[i];
}

Letter GameValueTable::best_move(const GamePosition& pos) const
{
    const auto i = index(pos);
    return pos.mover == Player::alice ? moves_.alice[i] : moves_.bob[i];
}

GameValueTable optimal_moves(const Dfa& dfa, const ExactOptions& options)
{
    return GameValueTable(dfa, options);
}

// ---------------------------------------------------------------------------
// Short games

namespace {

void check_short_game(const Dfa& dfa, const ShortGameOptions& options)
{
    const unsigned cap = std::min(options.max_states, kMaxSetWidth);
    if (dfa.states() > cap)
        throw CapacityError("short game solver is capped at " + std::to_string(cap) + " states, got " +
                            std::to_string(dfa.states()));
}

// Budgets from which the answer equals the unbounded winner.
std::uint64_t delegation_threshold(unsigned n, MoveCounting counting)
{
    const std::uint64_t bound = std::max<std::uint64_t>(cubic_move_bound(n), 1);
    return counting == MoveCounting::alice_moves ? bound : 2 * bound;
}

class MemoSolver {
public:
    MemoSolver(const Dfa& dfa, MoveCounting counting) : dfa_(dfa), counting_(counting) {}

    // Alice to move on `set` with `left` units of budget.
    bool alice(std::uint64_t set, std::uint64_t left)
    {
        if (std::has_single_bit(set))
            return true;
        if (left == 0)
            return false;
        const Key key{set, left, false};
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;
        bool result = false;
        for (Letter a = 0; a < dfa_.letters() && !result; ++a)
            result = bob(detail::image_mask(dfa_, set, a), left - 1);
        memo_.emplace(key, result);
        return result;
    }

    bool bob(std::uint64_t set, std::uint64_t left)
    {
        if (std::has_single_bit(set))
            return true;
        if (counting_ == MoveCounting::all_moves && left == 0)
            return false;
        const Key key{set, left, true};
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;
        const std::uint64_t after = counting_ == MoveCounting::all_moves ? left - 1 : left;
        bool result = true;
        for (Letter a = 0; a < dfa_.letters() && result; ++a)
            result = alice(detail::image_mask(dfa_, set, a), after);
        memo_.emplace(key, result);
        return result;
    }

private:
    struct Key {
        std::uint64_t set;
        std::uint64_t left;
        bool bob;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept
        {
            std::uint64_t h = k.set * 0x9E3779B97F4A7C15ULL;
            h ^= (k.left << 1 | static_cast<std::uint64_t>(k.bob)) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
            return static_cast<std::size_t>(h);
        }
    };

    const Dfa& dfa_;
    MoveCounting counting_;
    std::unordered_map<Key, bool, KeyHash> memo_;
};

} // namespace

bool short_game_decide(const Dfa& dfa, std::uint64_t moves, const ShortGameOptions& options)
{
    check_short_game(dfa, options);
    if (moves >= delegation_threshold(dfa.states(), options.counting))
        return decide_winner(dfa).winner == Player::alice;
    MemoSolver solver(dfa, options.counting);
    return solver.alice(detail::full_mask(dfa.states()), moves);
}

bool short_game_decide_lowmem(const Dfa& dfa, std::uint64_t moves, const ShortGameOptions& options)
{
    check_short_game(dfa, options);
    if (moves >= delegation_threshold(dfa.states(), options.counting))
        return decide_winner(dfa).winner == Player::alice;

    const bool all_moves = options.counting == MoveCounting::all_moves;
    const unsigned k = dfa.letters();

    // Leaf values that need no frame: singletons win, exhausted budgets lose.
    auto leaf = [&](std::uint64_t set, std::uint64_t left, bool bob_side) -> std::optional<bool> {
        if (std::has_single_bit(set))
            return true;
        if (left == 0 && (!bob_side || all_moves))
            return false;
        return std::nullopt;
    };

    struct Frame {
        std::uint64_t set;
        std::uint64_t left;
        bool bob_side;
        Letter next;
    };

    const std::uint64_t start = detail::full_mask(dfa.states());
    if (auto v = leaf(start, moves, false))
        return *v;

    std::vector<Frame> path{{start, moves, false, 0}};
    std::optional<bool> returned;
    while (true) {
        Frame& top = path.back();
        if (returned) {
            // Alice stops at the first winning letter, Bob at the first losing one.
            const bool decisive = top.bob_side ? !*returned : *returned;
            if (decisive || ++top.next == k) {
                // The last child's value is the frame's value either way.
                path.pop_back();
                if (path.empty())
                    return *returned;
                continue;
            }
            returned.reset();
        }
        const std::uint64_t child = detail::image_mask(dfa, top.set, top.next);
        const bool child_bob = !top.bob_side;
        const std::uint64_t child_left = (top.bob_side && !all_moves) ? top.left : top.left - 1;
        if (auto v = leaf(child, child_left, child_bob)) {
            returned = v;
            continue;
        }
        path.push_back({child, child_left, child_bob, 0});
    }
}

// ---------------------------------------------------------------------------
// Engine

GameEngine::GameEngine(Dfa dfa, std::optional<StrategyMode> mode, const ExactOptions& exact)
    : dfa_(std::move(dfa)),
      mode_(mode.value_or(dfa_.states() <= std::min(exact.max_states, kernels::kDenseMaxStates) ? StrategyMode::exact
                                                                                                : StrategyMode::pair)),
      pairs_(dfa_)
{
    if (dfa_.states() > kMaxSetWidth)
        throw CapacityError("game engine supports at most 64 states, got " + std::to_string(dfa_.states()));
    if (mode_ == StrategyMode::exact)
        values_ = std::make_unique<const GameValueTable>(dfa_, exact);
}

void GameEngine::check_position(const GamePosition& pos, Player expected) const
{
    if (pos.mover != expected)
        throw DomainError(std::string("it is not ") + to_string(expected) + "'s turn");
    if (pos.coins.width() != dfa_.states())
        throw DomainError("position width does not match the automaton");
    if (pos.coins.size() < 2)
        throw DomainError("the game is over: at most one coin remains");
}

Letter GameEngine::alice_move(const GamePosition& pos) const
{
    check_position(pos, Player::alice);
    if (values_) {
        if (values_->value(pos) == GameValueTable::kInfinity)
            throw StrategyError("Bob wins from " + to_string(pos.coins));
        return values_->best_move(pos);
    }
    // Work on the pair of lowest rank; its rank drops every round until
    // the pair merges, so the coin count keeps falling.
    const auto states = pos.coins.states();
    std::optional<std::pair<State, State>> best;
    std::uint32_t best_rank = PairGameTable::kUnmarked;
    for (std::size_t j = 1; j < states.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const std::uint32_t r = pairs_.rank(states[i], states[j], Player::alice);
            if (r == PairGameTable::kUnmarked)
                throw StrategyError("Bob wins from " + to_string(pos.coins));
            if (!best || r < best_rank) {
                best = {states[i], states[j]};
                best_rank = r;
            }
        }
    }
    return pairs_.alice_strategy(best->first, best->second);
}

Letter GameEngine::bob_move(const GamePosition& pos) const
{
    check_position(pos, Player::bob);
    if (values_)
        return values_->best_move(pos);

    const auto states = pos.coins.states();
    for (std::size_t j = 1; j < states.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            if (!pairs_.marked(states[i], states[j], Player::bob))
                return pairs_.bob_escape(states[i], states[j]);

    // Alice wins anyway: keep the most coins, then the slowest pair.
    Letter best = 0;
    std::tuple<unsigned, std::uint32_t> best_score{0, 0};
    for (Letter a = 0; a < dfa_.letters(); ++a) {
        const StateSet next = image(dfa_, pos.coins, std::span<const Letter>(&a, 1));
        std::uint32_t slowest = 0;
        if (!next.is_singleton()) {
            slowest = PairGameTable::kUnmarked;
            const auto ns = next.states();
            for (std::size_t j = 1; j < ns.size(); ++j)
                for (std::size_t i = 0; i < j; ++i)
                    slowest = std::min(slowest, pairs_.rank(ns[i], ns[j], Player::alice));
        }
        const std::tuple<unsigned, std::uint32_t> score{next.size(), slowest};
        if (a == 0 || score > best_score) {
            best = a;
            best_score = score;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Scripted defence on Cerny automata

bool verify_bob_cerny_strategy(unsigned n)
{
    if (n <= 3)
        throw DomainError("the scripted defence needs n > 3, got " + std::to_string(n));
    const Dfa c = cerny(n);
    const Letter letter_a = 0, letter_b = 1;

    auto bob_letter = [&](State x, State y) {
        const std::set<State> tracked{x, y};
        if (tracked == std::set<State>{n - 2, 0} || tracked == std::set<State>{0, 2})
            return letter_b;
        return letter_a;
    };

    // Configuration: the two tracked coins and the mover. The coins start on
    // n-1 and 1; any other coin they meet is the one removed.
    using Config = std::tuple<State, State, Player>;
    std::set<Config> seen;
    std::vector<Config> stack{{n - 1, 1, Player::alice}};
    seen.insert(stack.back());
    while (!stack.empty()) {
        const auto [x, y, mover] = stack.back();
        stack.pop_back();
        std::vector<Letter> choices;
        if (mover == Player::alice)
            choices = {letter_a, letter_b};
        else
            choices = {bob_letter(x, y)};
        for (Letter l : choices) {
            const State nx = c.next(x, l), ny = c.next(y, l);
            if (nx == ny)
                return false;
            const Config next{nx, ny, opponent(mover)};
            if (seen.insert(next).second)
                stack.push_back(next);
        }
    }
    return true;
}

} // namespace syncgame
