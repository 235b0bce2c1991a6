#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "cyltorsion/error.hpp"
#include "cyltorsion/geometry.hpp"

namespace cylt {

namespace {

struct Vec2 {
  double x, z;
};

// Liang-Barsky clip of segment a-b to [x0, x1] x [z0, z1]; returns the
// clipped length.
double clipped_length(Vec2 a, Vec2 b, double x0, double x1, double z0, double z1) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.x - a.x, dz = b.z - a.z;
  const std::array<double, 4> p{-dx, dx, -dz, dz};
  const std::array<double, 4> q{a.x - x0, x1 - a.x, a.z - z0, z1 - a.z};
  for (std::size_t e = 0; e < 4; ++e) {
    if (p[e] == 0.0) {
      if (q[e] < 0.0) return 0.0;
      continue;
    }
    const double t = q[e] / p[e];
    if (p[e] < 0.0)
      t0 = std::max(t0, t);
    else
      t1 = std::min(t1, t);
    if (t0 > t1) return 0.0;
  }
  return (t1 - t0) * std::hypot(dx, dz);
}

}  // namespace

double contour_length(const CylinderGrid& g, std::span<const double> values, double iso) {
  if (g.dimension() != 2) throw InvalidArgument("contour_length supports N = 2 only");
  if (values.size() != g.cell_count())
    throw InvalidArgument(fmt::format("field has {} values, grid has {} cells", values.size(),
                                      g.cell_count()));
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) throw InvalidArgument("contour of a constant field is undefined");

  const int n1 = g.n1(), nz = g.nz();
  // Mirrored ghost values make the contour meet every wall orthogonally,
  // which is the zero-flux reflection of the field.
  auto at = [&](int i, int k) {
    i = std::clamp(i, 0, n1 - 1);
    k = std::clamp(k, 0, nz - 1);
    return values[g.index(i, 0, k)] - iso;
  };
  const double h1 = g.h1(), hz = g.hz();
  const double x_right = g.cross_section().width(0);
  const double z_lo = g.z_min(), z_hi = g.z_min() + nz * hz;

  double total = 0.0;
  for (int k = -1; k < nz; ++k) {
    for (int i = -1; i < n1; ++i) {
      const double v00 = at(i, k), v10 = at(i + 1, k);
      const double v01 = at(i, k + 1), v11 = at(i + 1, k + 1);
      int code = 0;
      if (v00 < 0) code |= 1;
      if (v10 < 0) code |= 2;
      if (v11 < 0) code |= 4;
      if (v01 < 0) code |= 8;
      if (code == 0 || code == 15) continue;

      const double x0 = (i + 0.5) * h1, z0 = z_lo + (k + 0.5) * hz;
      auto lerp = [](double a, double b) { return a / (a - b); };
      const Vec2 bottom{x0 + lerp(v00, v10) * h1, z0};
      const Vec2 right{x0 + h1, z0 + lerp(v10, v11) * hz};
      const Vec2 top{x0 + lerp(v01, v11) * h1, z0 + hz};
      const Vec2 left{x0, z0 + lerp(v00, v01) * hz};

      auto seg = [&](Vec2 a, Vec2 b) {
        total += clipped_length(a, b, 0.0, x_right, z_lo, z_hi);
      };
      const double centre = 0.25 * (v00 + v10 + v01 + v11);
      switch (code) {
        case 1: case 14: seg(left, bottom); break;
        case 2: case 13: seg(bottom, right); break;
        case 3: case 12: seg(left, right); break;
        case 4: case 11: seg(right, top); break;
        case 6: case 9: seg(bottom, top); break;
        case 7: case 8: seg(left, top); break;
        case 5:
          // Saddle: corners 00 and 11 inside.
          if (centre < 0) {
            seg(left, top);
            seg(bottom, right);
          } else {
            seg(left, bottom);
            seg(right, top);
          }
          break;
        case 10:
          if (centre < 0) {
            seg(left, bottom);
            seg(right, top);
          } else {
            seg(left, top);
            seg(bottom, right);
          }
          break;
        default: break;
      }
    }
  }
  return total;
}

}  // namespace cylt
