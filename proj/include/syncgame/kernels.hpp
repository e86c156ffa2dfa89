#pragma once

// Dense power-set kernels behind the exact game solver.
//
// Every kernel has a plain serial reference and an OpenMP version; the test
// suite checks them against each other and bench/ times them.

#include <cstdint>
#include <limits>
#include <vector>

#include "syncgame/automaton.hpp"

namespace syncgame::kernels {

/// Hard ceiling on the state count of dense subset tables (masks are 32-bit
/// and the tables hold 2^n rows).
inline constexpr unsigned kDenseMaxStates = 24;

inline constexpr std::uint32_t kInfinity = std::numeric_limits<std::uint32_t>::max();

/// images[mask * k + a] = mask . a for every mask in [0, 2^n).
struct ImageTable {
    unsigned n = 0;
    unsigned k = 0;
    std::vector<std::uint32_t> images;

    std::uint32_t at(std::uint32_t mask, Letter a) const noexcept
    {
        return images[static_cast<std::size_t>(mask) * k + a];
    }
    std::size_t size() const noexcept { return std::size_t{1} << n; }
};

ImageTable build_image_table_serial(const Dfa& dfa);
ImageTable build_image_table_parallel(const Dfa& dfa);

/// Alice-move counts of the full game, indexed by coin mask (entry 0 unused).
/// alice[P]: Alice to move on P; bob[P]: Bob to move on P. kInfinity marks
/// positions Bob wins.
struct GameValues {
    std::vector<std::uint32_t> alice;
    std::vector<std::uint32_t> bob;
};

/// Backward induction in rounds: round m fixes every Bob position whose
/// successors are all fixed (value = max) and then every Alice position with a
/// fixed successor (value = m). Stops at the first round that fixes no Alice
/// position.
///
/// The serial version sweeps all masks every round; the parallel version
/// keeps compacted work lists.
GameValues solve_values_serial(const ImageTable& table);
GameValues solve_values_parallel(const ImageTable& table);

/// Least letter minimising bob[P.a] (Alice) or maximising alice[P.a] (Bob).
struct BestMoves {
    std::vector<std::uint8_t> alice;
    std::vector<std::uint8_t> bob;
};

BestMoves best_moves_serial(const ImageTable& table, const GameValues& values);
BestMoves best_moves_parallel(const ImageTable& table, const GameValues& values);

/// Number of threads the parallel kernels use (1 without OpenMP).
int max_threads() noexcept;

} // namespace syncgame::kernels
