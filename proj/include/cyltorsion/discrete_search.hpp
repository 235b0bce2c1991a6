#pragma once

// Discrete shape search on tiny grids: a cell-swap local search and an
// exhaustive enumerator used as its oracle.

#include <cstdint>
#include <vector>

#include "cyltorsion/error.hpp"
#include "cyltorsion/geometry.hpp"
#include "cyltorsion/rng.hpp"

namespace cylt {

struct SwapConfig {
  double solver_tol = 1e-12;
  int max_moves = 10000;
};

struct SwapReport {
  /// Energy of the start followed by the energy after each applied move.
  std::vector<double> energy_history;
  int moves = 0;
  double final_energy = 0.0;
};

struct SwapResult {
  DomainMask mask;
  SwapReport report;
};

/// Steepest descent over moves that drop one inside cell touching the free
/// boundary and add one eligible outside cell adjacent to the mask. The best
/// strictly improving move is applied; ties go to the lowest (remove, add)
/// cell indices.
SwapResult cell_swap_local_search(const DomainMask& mask, const SwapConfig& config = {});

/// Thrown when C(cells, k) exceeds the enumeration cap.
class EnumerationRefused : public InvalidArgument {
 public:
  EnumerationRefused(const std::string& what, std::uint64_t count)
      : InvalidArgument(what), count_(count) {}
  std::uint64_t count() const noexcept { return count_; }

 private:
  std::uint64_t count_;
};

struct BruteForceResult {
  DomainMask best;
  double energy = 0.0;
  /// Every mask whose energy is within 1e-9 (relative) of the minimum.
  std::vector<DomainMask> minimizers;
  std::uint64_t evaluated = 0;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 5'000'000;

/// Solves every k-cell mask built from eligible cells. Refuses when
/// C(grid.cell_count(), k) > cap.
BruteForceResult brute_force_min(const CylinderGrid& grid, std::size_t k,
                                 std::uint64_t cap = kDefaultEnumerationCap,
                                 double solver_tol = 1e-12);

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// k distinct eligible cells drawn uniformly (partial Fisher-Yates).
DomainMask random_mask(const CylinderGrid& grid, std::size_t k, Rng& rng);

}  // namespace cylt
