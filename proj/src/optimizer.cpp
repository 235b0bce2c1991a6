#include "cyltorsion/optimizer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "cyltorsion/error.hpp"
#include "cyltorsion/levelset.hpp"

namespace cylt {

namespace {

constexpr std::size_t kMinCells = 8;

double sq(double x) { return x * x; }

/// Normal speed on the cells near the zero contour. Each cell averages the
/// band samples (Gaussian weights, cut off at `smoothing` spacings) around
/// the point a band-midpoint depth inside its closest boundary point.
std::vector<double> normal_speed(const CylinderGrid& g, std::span<const double> phi,
                                 const GradientStats& stats, double mu, const Band& band,
                                 double smoothing) {
  const double h = g.h();
  std::vector<double> g2(g.cell_count(), std::numeric_limits<double>::quiet_NaN());
  for (const auto& s : stats.samples) g2[s.cell] = s.g * s.g;

  const double reach = (band.hi + 2.0) * h;
  const double depth = 0.5 * (band.lo + band.hi) * h;
  const double radius = smoothing * h;
  const double sig2 = radius * radius / 2.25;
  const int ri = static_cast<int>(std::ceil(radius / g.h1())) + 1;
  const int rk = static_cast<int>(std::ceil(radius / g.hz())) + 1;
  const double width = g.cross_section().width(0);
  const double z_lo = g.z_min(), z_hi = g.z_min() + g.nz() * g.hz();

  std::vector<double> v(g.cell_count(), 0.0);
  for (std::size_t idx = 0; idx < g.cell_count(); ++idx) {
    const double p = phi[idx];
    if (std::abs(p) > reach) continue;
    const auto n = levelset::normal(g, phi, idx);
    const Point c = g.center(idx);
    const double px = std::clamp(c.x1 - (p + depth) * n[0], 0.0, width);
    const double pz = std::clamp(c.z - (p + depth) * n[1], z_lo, z_hi);
    const int ci = std::clamp(static_cast<int>(px / g.h1()), 0, g.n1() - 1);
    const int ck = std::clamp(static_cast<int>((pz - z_lo) / g.hz()), 0, g.nz() - 1);
    double wsum = 0.0, acc = 0.0;
    for (int k = std::max(0, ck - rk); k <= std::min(g.nz() - 1, ck + rk); ++k) {
      for (int i = std::max(0, ci - ri); i <= std::min(g.n1() - 1, ci + ri); ++i) {
        const std::size_t q = g.index(i, 0, k);
        if (std::isnan(g2[q])) continue;
        const Point s = g.center(q);
        const double d2 = sq(s.x1 - px) + sq(s.z - pz);
        if (d2 > radius * radius) continue;
        const double w = std::exp(-d2 / sig2);
        wsum += w;
        acc += w * g2[q];
      }
    }
    // No samples nearby means a region thinner than the band: g ~ 0 there.
    const double local = wsum > 0.0 ? acc / wsum : 0.0;
    v[idx] = local - mu;
  }
  return v;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 0.5)) throw InvalidArgument(fmt::format("cfl must be in (0, 0.5], got {}", cfl));
  if (max_iters < 0) throw InvalidArgument("max_iters must be >= 0");
  if (!(volume_tol > 0.0)) throw InvalidArgument("volume_tol must be > 0");
  if (symmetrize_every < 0 || reinit_every < 0) throw InvalidArgument("intervals must be >= 0");
  if (window < 1) throw InvalidArgument("convergence window must be >= 1");
  if (!(energy_rtol > 0.0) || !(solver_tol > 0.0)) throw InvalidArgument("tolerances must be > 0");
  if (!(band.lo > 0.0 && band.hi >= band.lo)) throw InvalidArgument("invalid sampling band");
  if (!(speed_floor >= 0.0)) throw InvalidArgument("speed_floor must be >= 0");
  if (!(smoothing >= 1.0)) throw InvalidArgument("smoothing must be >= 1 grid spacing");
}

LevelSetState init_levelset(const DomainMask& initial, double c, const OptimizerConfig& config) {
  config.validate();
  const CylinderGrid& g = initial.grid();
  if (g.dimension() != 2) throw InvalidArgument("the level-set optimizer supports N = 2 only");
  if (initial.empty()) throw InvalidArgument("empty initial mask");
  if (!(c > 0.0)) throw InvalidArgument("target volume must be > 0");
  const auto cells = static_cast<std::size_t>(std::llround(c / g.cell_volume()));
  if (cells < kMinCells)
    throw ResolutionTooCoarse(fmt::format(
        "target volume {} is {} cells; need at least {}", c, cells, kMinCells));
  if (std::abs(static_cast<double>(cells) * g.cell_volume() - c) > config.volume_tol * c)
    throw ResolutionTooCoarse(fmt::format("volume {} is not representable within tolerance {}", c,
                                          config.volume_tol));

  std::vector<double> phi = levelset::signed_distance(initial);
  if (config.init_tilt != 0.0) {
    const double a = g.cross_section().width(0);
    for (std::size_t idx = 0; idx < phi.size(); ++idx)
      phi[idx] -= config.init_tilt * std::cos(oracles::kPi * g.center(idx).x1 / a);
    phi = levelset::redistance(g, phi);
  }
  levelset::shift_to_count(g, phi, cells);
  DomainMask mask = levelset::mask_of(g, phi);
  return LevelSetState{g, std::move(phi), c, cells, std::move(mask), 0, std::nullopt};
}

LevelSetState init_levelset(const CylinderGrid& grid, const Shape& shape, double c,
                            const OptimizerConfig& config) {
  return init_levelset(mask_from_shape(grid, shape), c, config);
}

StepRecord evolve_step(LevelSetState& state, const OptimizerConfig& config) {
  const CylinderGrid& g = state.grid;
  if (state.mask.cell_count() < kMinCells)
    throw ResolutionTooCoarse("shape shrank below 8 cells");

  SolveOptions so;
  so.tol = config.solver_tol;
  so.band = config.band;
  if (state.warm_start) so.initial = &*state.warm_start;
  TorsionSolution sol = solve_torsion(state.mask, so);
  const GradientStats stats = summarize(std::move(sol.boundary_gradient));
  if (stats.samples.empty())
    throw ResolutionTooCoarse("no cells in the sampling band; the shape is too thin for the grid");

  StepRecord rec;
  rec.iter = state.iteration;
  rec.energy = sol.energy;
  rec.volume = state.mask.volume();
  rec.c0_estimate = stats.c0_estimate;
  rec.rel_stddev = stats.rel_stddev;
  rec.gamma_length = contour_length(g, state.phi, 0.0);

  double mu = 0.0;
  for (const auto& s : stats.samples) mu += s.g * s.g;
  mu /= static_cast<double>(stats.samples.size());
  rec.mu = mu;

  const std::vector<double> v = normal_speed(g, state.phi, stats, mu, config.band, config.smoothing);
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  const double dt = config.cfl * g.h() / std::max({vmax, config.speed_floor * mu, 1e-300});
  rec.dt = dt;

  levelset::advect(g, state.phi, v, dt);
  levelset::shift_to_count(g, state.phi, state.target_cells);
  ++state.iteration;

  if (config.reinit_every > 0 && state.iteration % config.reinit_every == 0) {
    state.phi = levelset::redistance(g, state.phi);
    levelset::shift_to_count(g, state.phi, state.target_cells);
    rec.reinitialized = true;
  }
  DomainMask next = levelset::mask_of(g, state.phi);
  if (config.symmetrize_every > 0 && !g.half() &&
      state.iteration % config.symmetrize_every == 0) {
    next = steiner_symmetrize(next);
    state.phi = levelset::signed_distance(next);
    rec.symmetrized = true;
  }
  state.mask = std::move(next);
  state.warm_start = std::move(sol.u);

  const double vol = state.mask.volume();
  if (std::abs(vol - state.target_volume) > config.volume_tol * state.target_volume)
    throw InfeasibleGeometry(fmt::format("volume {} drifted from target {}", vol, state.target_volume));
  return rec;
}

std::vector<ContactAngle> contact_angles(const DomainMask& mask, std::span<const double> phi) {
  const CylinderGrid& g = mask.grid();
  std::vector<ContactAngle> out;
  if (g.dimension() != 2 || g.n1() < 3) return out;
  const BoundarySegments b = boundary_decompose(mask);
  for (Wall wall : {Wall::Left, Wall::Right}) {
    const int side = wall == Wall::Left ? 0 : 1;
    if (b.lateral_contact[0][static_cast<std::size_t>(side)] <= 0.0) continue;
    for (bool upper : {true, false}) {
      double sx = 0, sz = 0, sxx = 0, sxz = 0;
      int pts = 0;
      for (int c = 0; c < 3; ++c) {
        const int i = wall == Wall::Left ? c : g.n1() - 1 - c;
        double best = upper ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();
        bool found = false;
        for (int k = 0; k + 1 < g.nz(); ++k) {
          const double p0 = phi[g.index(i, 0, k)], p1 = phi[g.index(i, 0, k + 1)];
          if ((p0 < 0.0) == (p1 < 0.0)) continue;
          const double z = g.z_center(k) + p0 / (p0 - p1) * g.hz();
          best = upper ? std::max(best, z) : std::min(best, z);
          found = true;
        }
        if (!found) break;
        const double x = (i + 0.5) * g.h1();
        sx += x;
        sz += best;
        sxx += x * x;
        sxz += x * best;
        ++pts;
      }
      if (pts < 3) continue;
      const double denom = pts * sxx - sx * sx;
      const double slope = (pts * sxz - sx * sz) / denom;
      const double cosang = std::abs(slope) / std::sqrt(1.0 + slope * slope);
      out.push_back({wall, upper, std::acos(cosang) * 180.0 / oracles::kPi});
    }
  }
  return out;
}

void fill_diagnostics(OptimizerReport& r, const OptimizerConfig& config) {
  const DomainMask& mask = r.final_mask;
  const CylinderGrid& g = mask.grid();
  r.final_volume = mask.volume();
  r.gamma_length = contour_length(g, r.final_phi, 0.0);
  const BoundarySegments b = boundary_decompose(mask);
  r.gamma_staircase = b.free_measure;
  r.wall_measure = b.wall_measure;
  r.wall_contact = b.wall_measure > 0.0;
  r.contact_left = b.lateral_contact[0][0];
  r.contact_right = b.lateral_contact[0][1];
  // Distances to the smooth zero contour; facet distances are biased low
  // at the inner corners of the staircase.
  const std::vector<double> dist = levelset::redistance(g, r.final_phi);
  const GradientStats stats = boundary_gradient_stats(r.final_u, mask, dist, config.band);
  r.g_mean = stats.mean;
  r.g_rel_stddev = stats.rel_stddev;
  r.c0_estimate = stats.c0_estimate;
  r.c0 = oracles::c0_relations(r.final_volume, r.final_energy, r.gamma_length);
  const Connectivity conn = connectedness_check(mask);
  r.connected = conn.connected;
  r.components = conn.components;
  r.contact_angles = contact_angles(mask, r.final_phi);
}

OptimizerReport run(LevelSetState state, const OptimizerConfig& config) {
  config.validate();
  OptimizerReport report{.history = {},
                         .final_mask = state.mask,
                         .final_phi = {},
                         .final_u = ScalarField(state.grid),
                         .c0 = {},
                         .contact_angles = {}};
  report.target_volume = state.target_volume;
  for (int it = 0; it < config.max_iters; ++it) {
    report.history.push_back(evolve_step(state, config));
    const auto& hist = report.history;
    const std::size_t n = hist.size();
    if (n >= 2) {
      const StepRecord& prev = hist[n - 2];
      if (!prev.reinitialized && !prev.symmetrized) {
        ++report.monotonicity_checked;
        if (hist[n - 1].energy - prev.energy > 0.005 * std::abs(prev.energy))
          ++report.monotonicity_violations;
      }
    }
    const auto w = static_cast<std::size_t>(config.window);
    if (n > 2 * w) {
      const double e_now = hist[n - 1].energy, e_then = hist[n - 1 - w].energy;
      if (std::abs(e_now - e_then) <= config.energy_rtol * std::abs(e_now)) {
        report.converged = true;
        break;
      }
    }
  }
  report.iterations = static_cast<int>(report.history.size());

  SolveOptions so;
  so.tol = config.solver_tol;
  so.band = config.band;
  if (state.warm_start) so.initial = &*state.warm_start;
  TorsionSolution sol = solve_torsion(state.mask, so);
  report.final_energy = sol.energy;
  report.final_u = std::move(sol.u);
  report.final_mask = state.mask;
  report.final_phi = state.phi;
  fill_diagnostics(report, config);
  return report;
}

}  // namespace cylt
