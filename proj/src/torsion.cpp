#include "cyltorsion/torsion.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "cyltorsion/error.hpp"
#include "cyltorsion/kernels.hpp"

namespace cylt {

ScalarField::ScalarField(CylinderGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.cell_count())
    throw InvalidArgument(fmt::format("field has {} values, grid has {} cells",
                                      values_.size(), grid_.cell_count()));
}

double ScalarField::max() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

namespace {

std::vector<GradientSample> band_samples(const ScalarField& u, const DomainMask& mask, Band band);

/// Assembled finite-volume operator in the padded layout. Inactive cells
/// (outside the mask, ghosts) carry an identity row so the whole padded
/// system stays SPD and their unknowns stay at zero.
struct Operator {
  std::vector<double> diag;
  std::vector<double> inv_diag;
  std::array<std::vector<double>, kernels::kMaxStencilDirs> coef;
  kernels::Stencil stencil;
  std::size_t begin = 0;  // active padded range
  std::size_t end = 0;

  Operator(const DomainMask& mask) {
    const CylinderGrid& g = mask.grid();
    const std::size_t np = g.padded_size();
    diag.assign(np, 1.0);
    const int dims = g.dimension();
    const std::array<int, 3> counts{g.n1(), g.n2(), g.nz()};

    int dir = 0;
    std::array<int, kernels::kMaxStencilDirs> dir_axis{};
    std::array<int, kernels::kMaxStencilDirs> dir_side{};
    for (int axis = 0; axis < 3; ++axis) {
      if (dims == 2 && axis == 1) continue;
      for (int side : {-1, +1}) {
        dir_axis[static_cast<std::size_t>(dir)] = axis;
        dir_side[static_cast<std::size_t>(dir)] = side;
        coef[static_cast<std::size_t>(dir)].assign(np, 0.0);
        stencil.offset[dir] = side * g.padded_stride(axis);
        ++dir;
      }
    }
    stencil.dirs = dir;

    int kmin = g.nz(), kmax = -1;
    for (std::size_t idx : mask.inside_indices()) {
      const CellCoord c = g.coord(idx);
      kmin = std::min(kmin, c.k);
      kmax = std::max(kmax, c.k);
      const std::size_t p = g.padded_index(c.i, c.j, c.k);
      const std::array<int, 3> pos{c.i, c.j, c.k};
      double d = 0.0;
      for (int q = 0; q < dir; ++q) {
        const auto qi = static_cast<std::size_t>(q);
        const int axis = dir_axis[qi];
        const auto ai = static_cast<std::size_t>(axis);
        const double w = 1.0 / (g.spacing(axis) * g.spacing(axis));
        std::array<int, 3> nb = pos;
        nb[ai] += dir_side[qi];
        if (nb[ai] < 0 || nb[ai] >= counts[ai]) continue;  // wall: zero flux
        if (mask.contains(g.index(nb[0], nb[1], nb[2]))) {
          coef[qi][p] = w;
          d += w;
        } else {
          d += 2.0 * w;  // Dirichlet at the face, half-cell distance
        }
      }
      diag[p] = d;
    }
    inv_diag.resize(np);
    for (std::size_t p = 0; p < np; ++p) inv_diag[p] = 1.0 / diag[p];
    stencil.diag = diag.data();
    for (int q = 0; q < dir; ++q) stencil.coef[q] = coef[static_cast<std::size_t>(q)].data();

    if (kmax >= 0) {
      const auto plane = static_cast<std::size_t>(g.padded_stride(2));
      begin = static_cast<std::size_t>(kmin + 1) * plane;
      end = static_cast<std::size_t>(kmax + 2) * plane;
    }
  }

  void apply(const double* x, double* y) const {
    kernels::active().apply_stencil(stencil, x, y, begin, end);
  }
  std::size_t size() const { return end - begin; }
};

std::vector<double> padded_copy(const CylinderGrid& g, const DomainMask& mask,
                                std::span<const double> values) {
  std::vector<double> out(g.padded_size(), 0.0);
  for (std::size_t idx : mask.inside_indices()) out[g.padded_index(idx)] = values[idx];
  return out;
}

int iteration_cap(const SolveOptions& o, std::size_t unknowns) {
  if (o.max_iterations > 0) return o.max_iterations;
  const double cap = 50.0 * std::sqrt(static_cast<double>(unknowns));
  return static_cast<int>(std::clamp(cap, 100.0, static_cast<double>(kMaxIterations)));
}

}  // namespace

TorsionSolution solve_torsion(const CylinderGrid& grid, const DomainMask& mask, double tol) {
  if (!(grid == mask.grid())) throw InvalidArgument("mask lives on a different grid");
  SolveOptions o;
  o.tol = tol;
  return solve_torsion(mask, o);
}

TorsionSolution solve_torsion(const DomainMask& mask, const SolveOptions& options) {
  const CylinderGrid& g = mask.grid();
  if (mask.empty()) throw InvalidArgument("torsion solve on an empty mask");
  if (!(options.tol > 0.0)) throw InvalidArgument("solver tolerance must be > 0");
  if (options.initial && !(options.initial->grid() == g))
    throw InvalidArgument("warm start lives on a different grid");

  const kernels::KernelTable& k = kernels::active();
  const Operator A(mask);
  const std::size_t np = g.padded_size();
  const std::size_t n = A.size();
  const std::size_t b0 = A.begin;

  std::vector<double> b(np, 0.0);
  for (std::size_t idx : mask.inside_indices()) b[g.padded_index(idx)] = 1.0;
  std::vector<double> x = options.initial ? padded_copy(g, mask, options.initial->values())
                                          : std::vector<double>(np, 0.0);
  std::vector<double> r(np, 0.0), z(np, 0.0), p(np, 0.0), ap(np, 0.0);

  const double bnorm = std::sqrt(static_cast<double>(mask.cell_count()));
  const int cap = iteration_cap(options, mask.cell_count());
  int iterations = 0;
  double rel = std::numeric_limits<double>::infinity();

  auto true_residual = [&] {
    A.apply(x.data(), r.data());
    k.xpby(b.data() + b0, -1.0, r.data() + b0, n);  // r = b - Ax
    return std::sqrt(k.dot(r.data() + b0, r.data() + b0, n)) / bnorm;
  };

  rel = true_residual();
  // Restart from the true residual whenever the recursion claims convergence
  // but the actual residual has drifted above the target.
  while (rel > options.tol && iterations < cap) {
    k.mul(A.inv_diag.data() + b0, r.data() + b0, z.data() + b0, n);
    std::copy(z.begin() + static_cast<std::ptrdiff_t>(b0),
              z.begin() + static_cast<std::ptrdiff_t>(b0 + n),
              p.begin() + static_cast<std::ptrdiff_t>(b0));
    double rz = k.dot(r.data() + b0, z.data() + b0, n);
    while (iterations < cap) {
      A.apply(p.data(), ap.data());
      const double pap = k.dot(p.data() + b0, ap.data() + b0, n);
      if (!(pap > 0.0)) break;
      const double alpha = rz / pap;
      k.axpy(alpha, p.data() + b0, x.data() + b0, n);
      k.axpy(-alpha, ap.data() + b0, r.data() + b0, n);
      ++iterations;
      const double rr = std::sqrt(k.dot(r.data() + b0, r.data() + b0, n)) / bnorm;
      if (rr <= options.tol) break;
      k.mul(A.inv_diag.data() + b0, r.data() + b0, z.data() + b0, n);
      const double rz_new = k.dot(r.data() + b0, z.data() + b0, n);
      k.xpby(z.data() + b0, rz_new / rz, p.data() + b0, n);
      rz = rz_new;
    }
    const double prev = rel;
    rel = true_residual();
    if (rel > options.tol && !(rel < prev)) break;  // stagnated at round-off
  }
  if (rel > options.tol)
    throw NonConvergence(
        fmt::format("torsion solve stopped at relative residual {:.3e} after {} iterations "
                    "(target {:.1e})",
                    rel, iterations, options.tol),
        rel, iterations);

  TorsionSolution sol{.u = ScalarField(g), .boundary_gradient = {}};
  double sum = 0.0, xx = 0.0;
  for (std::size_t idx : mask.inside_indices()) {
    const double v = x[g.padded_index(idx)];
    sol.u[idx] = v;
    sum += v;
    xx += v * v;
  }
  A.apply(x.data(), ap.data());
  const double xax = k.dot(x.data() + b0, ap.data() + b0, n);
  const double vol = g.cell_volume();
  sol.energy_mass = -0.5 * vol * sum;
  sol.energy = sol.energy_mass;
  sol.energy_dirichlet = -0.5 * vol * xax;
  // |u.Au - u.b| = |u.r| <= |u| |r|
  sol.energy_consistency_bound =
      10.0 * 0.5 * vol * std::sqrt(xx) * rel * bnorm +
      64.0 * std::numeric_limits<double>::epsilon() * std::abs(sol.energy_mass);
  sol.iterations = iterations;
  sol.residual = rel;
  if (options.sample_gradient)
    sol.boundary_gradient = band_samples(sol.u, mask, options.band);
  return sol;
}

double energy_of(const TorsionSolution& solution) { return solution.energy; }

EnergyForms energy_forms(const ScalarField& u, const DomainMask& mask) {
  const CylinderGrid& g = mask.grid();
  if (!(u.grid() == g)) throw InvalidArgument("field and mask live on different grids");
  EnergyForms e;
  if (mask.empty()) return e;
  const Operator A(mask);
  const std::vector<double> x = padded_copy(g, mask, u.values());
  std::vector<double> ax(g.padded_size(), 0.0);
  A.apply(x.data(), ax.data());
  const auto& k = kernels::active();
  double sum = 0.0;
  for (std::size_t idx : mask.inside_indices()) sum += u[idx];
  e.mass = -0.5 * g.cell_volume() * sum;
  e.dirichlet = -0.5 * g.cell_volume() * k.dot(x.data() + A.begin, ax.data() + A.begin, A.size());
  return e;
}

ScalarField steiner_symmetrize(const ScalarField& u) {
  const CylinderGrid& g = u.grid();
  if (g.half()) throw InvalidArgument("Steiner symmetrization needs full-cylinder mode");
  ScalarField out(g);
  const int origin = g.axial_origin();
  std::vector<double> column(static_cast<std::size_t>(g.nz()));
  for (int j = 0; j < g.n2(); ++j) {
    for (int i = 0; i < g.n1(); ++i) {
      for (int k = 0; k < g.nz(); ++k) {
        const double v = u[g.index(i, j, k)];
        if (!(v >= 0.0))
          throw InvalidArgument(fmt::format("symmetrization needs u >= 0, got {} at cell ({}, {}, {})",
                                            v, i, j, k));
        column[static_cast<std::size_t>(k)] = v;
      }
      std::sort(column.begin(), column.end(), std::greater<>());
      for (int r = 0; r < g.nz(); ++r) {
        const int s = (r % 2 == 1) ? -(r + 1) / 2 : r / 2;
        out[g.index(i, j, origin + s)] = column[static_cast<std::size_t>(r)];
      }
    }
  }
  return out;
}

double axial_dirichlet_sum(const ScalarField& u, int i, int j) {
  const CylinderGrid& g = u.grid();
  double prev = 0.0, sum = 0.0;
  for (int k = 0; k < g.nz(); ++k) {
    const double v = u[g.index(i, j, k)];
    sum += (v - prev) * (v - prev);
    prev = v;
  }
  return sum + prev * prev;
}

GradientStats summarize(std::vector<GradientSample> samples) {
  GradientStats s;
  s.samples = std::move(samples);
  if (s.samples.empty()) return s;
  double sum = 0.0;
  for (const auto& q : s.samples) sum += q.g;
  s.mean = sum / static_cast<double>(s.samples.size());
  double var = 0.0;
  for (const auto& q : s.samples) var += (q.g - s.mean) * (q.g - s.mean);
  s.stddev = std::sqrt(var / static_cast<double>(s.samples.size()));
  s.rel_stddev = s.mean != 0.0 ? s.stddev / std::abs(s.mean) : 0.0;
  s.c0_estimate = s.mean * s.mean;
  return s;
}

namespace {

std::vector<GradientSample> band_samples(const ScalarField& u, const DomainMask& mask, Band band) {
  const CylinderGrid& g = mask.grid();
  if (!(band.lo > 0.0) || !(band.hi >= band.lo)) throw InvalidArgument("invalid sampling band");
  const double h = g.h();
  const std::vector<double> d = distance_to_free_boundary(mask, band.hi * h);
  std::vector<GradientSample> samples;
  for (std::size_t idx : mask.inside_indices()) {
    if (d[idx] >= band.lo * h && d[idx] <= band.hi * h)
      samples.push_back({idx, d[idx], u[idx] / d[idx]});
  }
  return samples;
}

GradientStats nonempty(std::vector<GradientSample> samples) {
  if (samples.empty()) throw InvalidArgument("boundary band contains no cells");
  return summarize(std::move(samples));
}

}  // namespace

GradientStats boundary_gradient_stats(const ScalarField& u, const DomainMask& mask, Band band) {
  return nonempty(band_samples(u, mask, band));
}

GradientStats boundary_gradient_stats(const ScalarField& u, const DomainMask& mask,
                                      std::span<const double> levelset, Band band) {
  const CylinderGrid& g = mask.grid();
  if (levelset.size() != g.cell_count()) throw InvalidArgument("level set size mismatch");
  const double h = g.h();
  std::vector<GradientSample> samples;
  for (std::size_t idx : mask.inside_indices()) {
    const double d = -levelset[idx];
    if (d >= band.lo * h && d <= band.hi * h) samples.push_back({idx, d, u[idx] / d});
  }
  return nonempty(std::move(samples));
}

ScalarField analytic_rect_field(const CylinderGrid& grid, double h) {
  // Same feasibility rule as the mask of the bounded cylinder.
  const DomainMask mask = mask_from_shape(grid, BoundedCylinder{h});
  ScalarField u(grid);
  for (std::size_t idx : mask.inside_indices()) {
    const double z = grid.center(idx).z;
    u[idx] = 0.5 * (0.25 * h * h - z * z);
  }
  return u;
}

}  // namespace cylt
