#include "cyltorsion/levelset.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "cyltorsion/error.hpp"
#include "cyltorsion/kernels.hpp"

namespace cylt::levelset {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_2d(const CylinderGrid& g) {
  if (g.dimension() != 2) throw InvalidArgument("level-set operations support N = 2 only");
}

/// Solves ((d-a)/hx)^2 + ((d-b)/hz)^2 = 1 upwind, given the smaller
/// neighbour values a (x) and b (z).
double eikonal_update(double a, double b, double hx, double hz) {
  if (!std::isfinite(a) && !std::isfinite(b)) return kInf;
  if (!std::isfinite(a)) return b + hz;
  if (!std::isfinite(b)) return a + hx;
  const double da = a + hx, db = b + hz;
  if (da <= b) return da;
  if (db <= a) return db;
  const double ix = 1.0 / (hx * hx), iz = 1.0 / (hz * hz);
  const double A = ix + iz;
  const double B = -2.0 * (a * ix + b * iz);
  const double C = a * a * ix + b * b * iz - 1.0;
  const double disc = std::max(0.0, B * B - 4.0 * A * C);
  return (-B + std::sqrt(disc)) / (2.0 * A);
}

/// Gauss-Seidel sweeps in the four diagonal orderings until nothing changes.
void fast_sweep(const CylinderGrid& g, std::vector<double>& d, const std::vector<std::uint8_t>& frozen) {
  const int n1 = g.n1(), nz = g.nz();
  const double hx = g.h1(), hz = g.hz();
  auto value = [&](int i, int k) {
    if (i < 0 || i >= n1 || k < 0 || k >= nz) return kInf;
    return d[g.index(i, 0, k)];
  };
  for (int pass = 0; pass < 8; ++pass) {
    bool changed = false;
    for (int dir = 0; dir < 4; ++dir) {
      const int si = (dir & 1) ? -1 : 1;
      const int sk = (dir & 2) ? -1 : 1;
      for (int kk = 0; kk < nz; ++kk) {
        const int k = sk > 0 ? kk : nz - 1 - kk;
        for (int ii = 0; ii < n1; ++ii) {
          const int i = si > 0 ? ii : n1 - 1 - ii;
          const std::size_t idx = g.index(i, 0, k);
          if (frozen[idx]) continue;
          const double a = std::min(value(i - 1, k), value(i + 1, k));
          const double b = std::min(value(i, k - 1), value(i, k + 1));
          const double nd = eikonal_update(a, b, hx, hz);
          if (nd < d[idx] - 1e-15 * std::abs(nd)) {
            d[idx] = nd;
            changed = true;
          }
        }
      }
    }
    if (!changed) break;
  }
}

}  // namespace

std::vector<double> signed_distance(const DomainMask& mask) {
  const CylinderGrid& g = mask.grid();
  require_2d(g);
  if (mask.empty()) throw InvalidArgument("signed distance of an empty mask");
  std::vector<double> d(g.cell_count(), kInf);
  std::vector<std::uint8_t> frozen(g.cell_count(), 0);
  const int n1 = g.n1(), nz = g.nz();
  for (int k = 0; k < nz; ++k) {
    for (int i = 0; i < n1; ++i) {
      const std::size_t idx = g.index(i, 0, k);
      const bool in = mask.contains(idx);
      double best = kInf;
      auto probe = [&](int ni, int nk, double half) {
        if (ni < 0 || ni >= n1 || nk < 0 || nk >= nz) return;
        if (mask.contains(g.index(ni, 0, nk)) != in) best = std::min(best, half);
      };
      probe(i - 1, k, 0.5 * g.h1());
      probe(i + 1, k, 0.5 * g.h1());
      probe(i, k - 1, 0.5 * g.hz());
      probe(i, k + 1, 0.5 * g.hz());
      if (std::isfinite(best)) {
        d[idx] = best;
        frozen[idx] = 1;
      }
    }
  }
  fast_sweep(g, d, frozen);
  for (std::size_t idx = 0; idx < d.size(); ++idx)
    if (mask.contains(idx)) d[idx] = -d[idx];
  return d;
}

std::vector<double> redistance(const CylinderGrid& g, std::span<const double> phi) {
  require_2d(g);
  if (phi.size() != g.cell_count()) throw InvalidArgument("level set size mismatch");
  std::vector<double> d(g.cell_count(), kInf);
  std::vector<std::uint8_t> frozen(g.cell_count(), 0);
  const int n1 = g.n1(), nz = g.nz();
  bool any = false;
  for (int k = 0; k < nz; ++k) {
    for (int i = 0; i < n1; ++i) {
      const std::size_t idx = g.index(i, 0, k);
      const double p = phi[idx];
      const bool in = p < 0.0;
      // Distance along each axis to the nearest interpolated crossing.
      double dx = kInf, dz = kInf;
      auto probe = [&](int ni, int nk, double h, double& out) {
        if (ni < 0 || ni >= n1 || nk < 0 || nk >= nz) return;
        const double q = phi[g.index(ni, 0, nk)];
        if ((q < 0.0) == in) return;
        const double theta = p / (p - q);
        out = std::min(out, theta * h);
      };
      probe(i - 1, k, g.h1(), dx);
      probe(i + 1, k, g.h1(), dx);
      probe(i, k - 1, g.hz(), dz);
      probe(i, k + 1, g.hz(), dz);
      if (!std::isfinite(dx) && !std::isfinite(dz)) continue;
      double dist;
      if (std::isfinite(dx) && std::isfinite(dz))
        dist = dx * dz / std::hypot(dx, dz);  // distance to the line through both crossings
      else
        dist = std::isfinite(dx) ? dx : dz;
      d[idx] = dist;
      frozen[idx] = 1;
      any = true;
    }
  }
  if (!any) throw InvalidArgument("level set has no zero crossing");
  fast_sweep(g, d, frozen);
  for (std::size_t idx = 0; idx < d.size(); ++idx)
    if (phi[idx] < 0.0) d[idx] = -d[idx];
  return d;
}

DomainMask mask_of(const CylinderGrid& g, std::span<const double> phi) {
  std::vector<std::uint8_t> inside(g.cell_count(), 0);
  for (std::size_t idx = 0; idx < inside.size(); ++idx) inside[idx] = phi[idx] < 0.0;
  return DomainMask(g, std::move(inside));
}

double shift_to_count(const CylinderGrid& g, std::vector<double>& phi, std::size_t cells) {
  if (cells == 0 || cells >= g.cell_count())
    throw InvalidArgument(fmt::format("cannot target {} of {} cells", cells, g.cell_count()));
  // Rank by (phi, index) so ties at the threshold resolve deterministically.
  std::vector<std::size_t> order(phi.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto less = [&](std::size_t x, std::size_t y) {
    return phi[x] < phi[y] || (phi[x] == phi[y] && x < y);
  };
  const auto nth = order.begin() + static_cast<std::ptrdiff_t>(cells);
  std::nth_element(order.begin(), nth, order.end(), less);
  const double above = phi[*nth];
  const double below = phi[*std::max_element(order.begin(), nth, less)];
  const double shift = 0.5 * (below + above);
  for (double& v : phi) v -= shift;
  if (below == above) {
    const double eps = 1e-12 * g.h();
    for (auto it = order.begin(); it != order.end(); ++it) {
      double& v = phi[*it];
      if (it < nth && v >= 0.0) v = -eps;
      if (it >= nth && v < 0.0) v = eps;
    }
  }
  for (std::size_t idx = 0; idx < phi.size(); ++idx)
    if (phi[idx] < 0.0 && !g.eligible(idx))
      throw InfeasibleGeometry("evolving shape reached the cap layer of the truncation");
  return shift;
}

void advect(const CylinderGrid& g, std::vector<double>& phi, std::span<const double> speed,
            double dt) {
  require_2d(g);
  const int n1 = g.n1(), nz = g.nz();
  const std::size_t np = g.padded_size();
  std::vector<double> pp(np, 0.0), vp(np, 0.0), out(np, 0.0);
  for (int k = -1; k <= nz; ++k) {
    const int kc = std::clamp(k, 0, nz - 1);
    for (int i = -1; i <= n1; ++i) {
      const int ic = std::clamp(i, 0, n1 - 1);
      const std::size_t src = g.index(ic, 0, kc);
      pp[g.padded_index(i, 0, k)] = phi[src];
      if (i == ic && k == kc) vp[g.padded_index(i, 0, k)] = speed[src];
    }
  }
  kernels::HamiltonJacobiArgs args;
  args.phi = pp.data();
  args.speed = vp.data();
  args.out = out.data();
  args.row_stride = g.padded_stride(2);
  args.inv_hx = 1.0 / g.h1();
  args.inv_hz = 1.0 / g.hz();
  args.dt = dt;
  const auto row = static_cast<std::size_t>(args.row_stride);
  kernels::active().hamilton_jacobi(args, row, row * static_cast<std::size_t>(nz + 1));
  for (int k = 0; k < nz; ++k)
    for (int i = 0; i < n1; ++i) phi[g.index(i, 0, k)] = out[g.padded_index(i, 0, k)];
}

std::array<double, 2> normal(const CylinderGrid& g, std::span<const double> phi,
                             std::size_t idx) {
  const CellCoord c = g.coord(idx);
  auto at = [&](int i, int k) { return phi[g.index(i, 0, k)]; };
  auto diff = [&](int lo_i, int lo_k, int hi_i, int hi_k, double dist) {
    return (at(hi_i, hi_k) - at(lo_i, lo_k)) / dist;
  };
  const int n1 = g.n1(), nz = g.nz();
  double gx, gz;
  if (c.i == 0)
    gx = diff(0, c.k, 1, c.k, g.h1());
  else if (c.i == n1 - 1)
    gx = diff(n1 - 2, c.k, n1 - 1, c.k, g.h1());
  else
    gx = diff(c.i - 1, c.k, c.i + 1, c.k, 2.0 * g.h1());
  if (c.k == 0)
    gz = diff(c.i, 0, c.i, 1, g.hz());
  else if (c.k == nz - 1)
    gz = diff(c.i, nz - 2, c.i, nz - 1, g.hz());
  else
    gz = diff(c.i, c.k - 1, c.i, c.k + 1, 2.0 * g.hz());
  const double norm = std::hypot(gx, gz);
  if (norm == 0.0) return {0.0, 0.0};
  return {gx / norm, gz / norm};
}

}  // namespace cylt::levelset
