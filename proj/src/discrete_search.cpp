#include "cyltorsion/discrete_search.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "cyltorsion/torsion.hpp"

namespace cylt {

namespace {

template <class F>
void for_each_neighbor(const CylinderGrid& g, std::size_t idx, F&& f) {
  const CellCoord c = g.coord(idx);
  const int d[6][3] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}};
  for (const auto& o : d) {
    const int i = c.i + o[0], j = c.j + o[1], k = c.k + o[2];
    if (i < 0 || i >= g.n1() || j < 0 || j >= g.n2() || k < 0 || k >= g.nz()) continue;
    f(g.index(i, j, k));
  }
}

TorsionSolution solve(const DomainMask& m, double tol, const ScalarField* warm) {
  SolveOptions so;
  so.tol = tol;
  so.initial = warm;
  so.sample_gradient = false;
  return solve_torsion(m, so);
}

}  // namespace

SwapResult cell_swap_local_search(const DomainMask& start, const SwapConfig& config) {
  if (start.empty()) throw InvalidArgument("cell swap needs a nonempty mask");
  const CylinderGrid& g = start.grid();
  DomainMask mask = start;
  TorsionSolution cur = solve(mask, config.solver_tol, nullptr);
  SwapReport rep;
  rep.energy_history.push_back(cur.energy);

  while (rep.moves < config.max_moves) {
    std::vector<std::size_t> removable, addable;
    std::vector<std::uint8_t> seen(g.cell_count(), 0);
    for (std::size_t idx : mask.inside_indices()) {
      bool free_face = false;
      for_each_neighbor(g, idx, [&](std::size_t n) {
        if (mask.contains(n)) return;
        free_face = true;
        if (g.eligible(n) && !seen[n]) {
          seen[n] = 1;
          addable.push_back(n);
        }
      });
      if (free_face) removable.push_back(idx);
    }
    std::sort(addable.begin(), addable.end());

    double best = cur.energy;
    std::optional<std::pair<std::size_t, std::size_t>> move;
    std::optional<TorsionSolution> best_sol;
    for (std::size_t r : removable) {
      for (std::size_t a : addable) {
        DomainMask trial = mask;
        trial.set(r, false);
        trial.set(a, true);
        TorsionSolution s = solve(trial, config.solver_tol, &cur.u);
        // Strict improvement beyond solver noise; the scan order already
        // gives ties to the lowest (remove, add) pair.
        if (s.energy < best - 1e-12 * std::abs(best)) {
          best = s.energy;
          move = std::make_pair(r, a);
          best_sol = std::move(s);
        }
      }
    }
    if (!move) break;
    mask.set(move->first, false);
    mask.set(move->second, true);
    cur = std::move(*best_sol);
    ++rep.moves;
    rep.energy_history.push_back(cur.energy);
  }
  rep.final_energy = cur.energy;
  return SwapResult{std::move(mask), std::move(rep)};
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i is exact; cancel the gcd first so the product
    // only overflows when the result does.
    const std::uint64_t g = std::gcd(r, i);
    const std::uint64_t f = (n - k + i) / (i / g);
    if (__builtin_mul_overflow(r / g, f, &r)) return UINT64_MAX;
  }
  return r;
}

BruteForceResult brute_force_min(const CylinderGrid& g, std::size_t k, std::uint64_t cap,
                                 double solver_tol) {
  std::vector<std::size_t> cells;
  for (std::size_t idx = 0; idx < g.cell_count(); ++idx)
    if (g.eligible(idx)) cells.push_back(idx);
  if (k == 0 || k > cells.size())
    throw InvalidArgument(fmt::format("cannot place {} cells in {} eligible cells", k, cells.size()));
  const std::uint64_t count = binomial(g.cell_count(), k);
  if (count > cap)
    throw EnumerationRefused(
        fmt::format("C({}, {}) = {} exceeds the enumeration cap {}", g.cell_count(), k, count, cap),
        count);

  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  struct Hit {
    std::vector<std::size_t> pick;
    double energy;
  };
  std::vector<Hit> hits;
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t evaluated = 0;
  const std::size_t n = cells.size();
  while (true) {
    DomainMask m(g);
    for (std::size_t p : pick) m.set(cells[p], true);
    const double e = solve(m, solver_tol, nullptr).energy;
    ++evaluated;
    if (e < best) best = e;
    if (e <= best + 1e-9 * std::abs(best)) hits.push_back({pick, e});
    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }

  BruteForceResult out{DomainMask(g), best, {}, evaluated};
  bool first = true;
  for (const Hit& h : hits) {
    if (h.energy > best + 1e-9 * std::abs(best)) continue;
    DomainMask m(g);
    for (std::size_t p : h.pick) m.set(cells[p], true);
    if (first) {
      out.best = m;
      first = false;
    }
    out.minimizers.push_back(std::move(m));
  }
  return out;
}

DomainMask random_mask(const CylinderGrid& g, std::size_t k, Rng& rng) {
  std::vector<std::size_t> cells;
  for (std::size_t idx = 0; idx < g.cell_count(); ++idx)
    if (g.eligible(idx)) cells.push_back(idx);
  if (k == 0 || k > cells.size())
    throw InvalidArgument(fmt::format("cannot place {} cells in {} eligible cells", k, cells.size()));
  DomainMask m(g);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(cells.size() - i));
    std::swap(cells[i], cells[j]);
    m.set(cells[i], true);
  }
  return m;
}

}  // namespace cylt
