#include "syncgame/weighted.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <unordered_map>

#include "syncgame/analysis.hpp"
#include "syncgame/game.hpp"

namespace syncgame {

namespace {

Cost saturating_add(Cost a, Cost b) noexcept
{
    const Cost max = std::numeric_limits<Cost>::max();
    return a > max - b ? max : a + b;
}

void check_letters(const Dwa& dwa, std::span<const Letter> w)
{
    for (Letter a : w)
        if (a >= dwa.letters())
            throw DomainError("letter " + std::to_string(a) + " out of range");
}

} // namespace

Cost word_cost(const Dwa& dwa, State q, std::span<const Letter> w)
{
    if (q >= dwa.states())
        throw DomainError("state " + std::to_string(q) + " out of range");
    check_letters(dwa, w);
    Cost total = 0;
    for (Letter a : w) {
        total = saturating_add(total, dwa.cost(q, a));
        q = dwa.dfa().next(q, a);
    }
    return total;
}

Cost sync_cost(const Dwa& dwa, std::span<const Letter> w)
{
    check_letters(dwa, w);
    const State end0 = apply_word(dwa.dfa(), 0, w);
    Cost worst = word_cost(dwa, 0, w);
    for (State q = 1; q < dwa.states(); ++q) {
        const State end = apply_word(dwa.dfa(), q, w);
        if (end != end0)
            throw ContractError("not a reset word: state 0 ends in " + std::to_string(end0) + ", state " +
                                std::to_string(q) + " ends in " + std::to_string(end));
        worst = std::max(worst, word_cost(dwa, q, w));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Synchronizing on budget

namespace {

// Per-start-state current states, packed four bits each.
using Packed = std::uint64_t;

State unpack(Packed p, State q) noexcept
{
    return static_cast<State>((p >> (4 * q)) & 0xF);
}

bool all_equal(Packed p, unsigned n) noexcept
{
    const State first = unpack(p, 0);
    for (State q = 1; q < n; ++q)
        if (unpack(p, q) != first)
            return false;
    return true;
}

class ProfileSearch {
public:
    ProfileSearch(const Dwa& dwa, Cost budget, const BudgetOptions& options)
        : dwa_(dwa), n_(dwa.states()), budget_(budget), options_(options)
    {
    }

    BudgetResult run(std::stop_token stop)
    {
        Packed start = 0;
        for (State q = 0; q < n_; ++q)
            start |= static_cast<Packed>(q) << (4 * q);
        add(start, std::vector<Cost>(n_, 0), kNoParent, 0);

        while (!frontier_.empty()) {
            if (stop.stop_requested())
                throw Cancelled();
            const auto [priority, id] = frontier_.top();
            frontier_.pop();
            if (!nodes_[id].alive)
                continue;
            if (all_equal(nodes_[id].positions, n_))
                return success(id, priority);

            const Packed positions = nodes_[id].positions;
            for (Letter a = 0; a < dwa_.letters(); ++a) {
                Packed next = 0;
                bool over = false;
                scratch_.assign(n_, 0);
                for (State q = 0; q < n_ && !over; ++q) {
                    const State at = unpack(positions, q);
                    const Cost c = saturating_add(costs(id)[q], dwa_.cost(at, a));
                    over = c > budget_;
                    scratch_[q] = c;
                    next |= static_cast<Packed>(dwa_.dfa().next(at, a)) << (4 * q);
                }
                if (!over)
                    add(next, scratch_, id, a);
            }
        }
        return {};
    }

private:
    static constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

    struct Node {
        Packed positions;
        std::uint32_t parent;
        Letter letter;
        std::uint32_t depth;
        bool alive;
    };

    std::span<const Cost> costs(std::uint32_t id) const
    {
        return std::span<const Cost>(cost_pool_).subspan(static_cast<std::size_t>(id) * n_, n_);
    }

    static bool dominates(std::span<const Cost> a, std::span<const Cost> b) noexcept
    {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] > b[i])
                return false;
        return true;
    }

    void add(Packed positions, const std::vector<Cost>& cost, std::uint32_t parent, Letter letter)
    {
        auto& bucket = antichains_[positions];
        for (std::uint32_t other : bucket)
            if (dominates(costs(other), cost))
                return;
        std::erase_if(bucket, [&](std::uint32_t other) {
            if (!dominates(cost, costs(other)))
                return false;
            nodes_[other].alive = false;
            return true;
        });

        if (nodes_.size() >= options_.max_profiles)
            throw CapacityError("budget search exceeded " + std::to_string(options_.max_profiles) + " profiles");
        const auto id = static_cast<std::uint32_t>(nodes_.size());
        const std::uint32_t depth = parent == kNoParent ? 0 : nodes_[parent].depth + 1;
        nodes_.push_back({positions, parent, letter, depth, true});
        cost_pool_.insert(cost_pool_.end(), cost.begin(), cost.end());
        bucket.push_back(id);
        frontier_.push({*std::max_element(cost.begin(), cost.end()), id});
    }

    BudgetResult success(std::uint32_t id, Cost cost) const
    {
        BudgetResult result;
        result.within_budget = true;
        result.witness_cost = cost;
        if (nodes_[id].depth > options_.max_witness_length) {
            result.witness_truncated = true;
            return result;
        }
        Word w;
        for (std::uint32_t v = id; nodes_[v].parent != kNoParent; v = nodes_[v].parent)
            w.push_back(nodes_[v].letter);
        std::reverse(w.begin(), w.end());
        result.witness = std::move(w);
        return result;
    }

    using Entry = std::pair<Cost, std::uint32_t>;

    const Dwa& dwa_;
    unsigned n_;
    Cost budget_;
    BudgetOptions options_;
    std::vector<Node> nodes_;
    std::vector<Cost> cost_pool_;
    std::vector<Cost> scratch_;
    std::unordered_map<Packed, std::vector<std::uint32_t>> antichains_;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier_;
};

void check_budget_capacity(unsigned n, unsigned cap)
{
    const unsigned limit = std::min(cap, 16U);
    if (n > limit)
        throw CapacityError("budget search is capped at " + std::to_string(limit) + " states, got " +
                            std::to_string(n));
}

} // namespace

BudgetResult budget_decide(const BudgetInstance& instance, const BudgetOptions& options, std::stop_token stop)
{
    check_budget_capacity(instance.dwa.states(), options.max_states);
    if (instance.budget < 1)
        throw DomainError("the budget must be a positive integer");
    return ProfileSearch(instance.dwa, instance.budget, options).run(stop);
}

std::optional<Cost> min_sync_cost(const Dwa& dwa, const BudgetOptions& options, std::stop_token stop)
{
    check_budget_capacity(dwa.states(), options.max_states);
    if (dwa.states() == 1)
        return Cost{0};
    const auto shortest = shortest_reset_word(dwa.dfa());
    if (!shortest.synchronizing)
        return std::nullopt;

    Cost lo = 1;
    Cost hi = sync_cost(dwa, *shortest.shortest_word);
    while (lo < hi) {
        const Cost mid = lo + (hi - lo) / 2;
        if (budget_decide({dwa, mid}, options, stop).within_budget)
            hi = mid;
        else
            lo = mid + 1;
    }
    return hi;
}

// ---------------------------------------------------------------------------
// Synchronization game on budget

namespace {

class BudgetGame {
public:
    BudgetGame(const Dwa& dwa, Cost budget, const GameBudgetOptions& options, std::stop_token stop)
        : dwa_(dwa), n_(dwa.states()), budget_(budget), options_(options), stop_(std::move(stop)),
          pairs_(dwa.dfa())
    {
    }

    bool start()
    {
        if (stop_.stop_requested())
            throw Cancelled();
        Profile p(n_ + 1, 0);
        Packed positions = 0;
        for (State q = 0; q < n_; ++q)
            positions |= static_cast<Packed>(q) << (4 * q);
        p[n_] = positions;
        return solve(p, Player::alice);
    }

private:
    // costs[0..n) then the packed positions.
    using Profile = std::vector<Cost>;

    struct Hash {
        std::size_t operator()(const Profile& p) const noexcept
        {
            std::uint64_t h = 0xcbf29ce484222325ULL;
            for (Cost c : p)
                h = (h ^ c) * 0x100000001b3ULL;
            return static_cast<std::size_t>(h);
        }
    };

    // Every move raises every start state's cost by at least one, so the
    // path from the root never repeats a profile and has at most B moves.
    bool solve(const Profile& p, Player mover)
    {
        const auto positions = static_cast<Packed>(p[n_]);
        if (all_equal(positions, n_))
            return true;
        std::uint64_t coins = 0;
        for (State q = 0; q < n_; ++q)
            coins |= std::uint64_t{1} << unpack(positions, q);
        if (pairs_.bob_wins_from(coins, mover))
            return false;

        auto& memo = mover == Player::alice ? alice_memo_ : bob_memo_;
        if (auto it = memo.find(p); it != memo.end())
            return it->second;
        if (stop_.stop_requested())
            throw Cancelled();

        const bool alice = mover == Player::alice;
        bool result = !alice;
        for (Letter a = 0; a < dwa_.letters(); ++a) {
            Profile next(n_ + 1);
            Packed np = 0;
            bool over = false;
            for (State q = 0; q < n_ && !over; ++q) {
                const State at = unpack(positions, q);
                next[q] = saturating_add(p[q], dwa_.cost(at, a));
                over = next[q] > budget_;
                np |= static_cast<Packed>(dwa_.dfa().next(at, a)) << (4 * q);
            }
            next[n_] = np;
            const bool win = !over && solve(next, opponent(mover));
            if (alice && win) {
                result = true;
                break;
            }
            if (!alice && !win) {
                result = false;
                break;
            }
        }
        if (alice_memo_.size() + bob_memo_.size() >= options_.max_nodes)
            throw CapacityError("budget game exceeded " + std::to_string(options_.max_nodes) + " nodes");
        memo.emplace(p, result);
        return result;
    }

    const Dwa& dwa_;
    unsigned n_;
    Cost budget_;
    GameBudgetOptions options_;
    std::stop_token stop_;
    PairGameTable pairs_;
    std::unordered_map<Profile, bool, Hash> alice_memo_;
    std::unordered_map<Profile, bool, Hash> bob_memo_;
};

} // namespace

bool game_on_budget(const Dwa& dwa, Cost budget, const GameBudgetOptions& options, std::stop_token stop)
{
    const unsigned limit = std::min(options.max_states, 16U);
    if (dwa.states() > limit)
        throw CapacityError("budget game is capped at " + std::to_string(limit) + " states, got " +
                            std::to_string(dwa.states()));
    if (budget > options.max_budget)
        throw CapacityError("budget game is capped at B = " + std::to_string(options.max_budget));
    return BudgetGame(dwa, budget, options, std::move(stop)).start();
}

} // namespace syncgame
