#include "cyltorsion/geometry.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "cyltorsion/error.hpp"

namespace cylt {

namespace {

constexpr double kFitSlack = 1e-12;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

const char* to_string(Mode mode) { return mode == Mode::Full ? "full" : "half"; }

Mode parse_mode(const std::string& text) {
  if (text == "full") return Mode::Full;
  if (text == "half") return Mode::Half;
  throw InvalidArgument(fmt::format("mode must be 'full' or 'half', got '{}'", text));
}

// --- CrossSection --------------------------------------------------------------

CrossSection CrossSection::interval(double a) {
  if (!positive_finite(a)) throw InvalidArgument(fmt::format("interval length must be > 0, got {}", a));
  return CrossSection(1, {a, 0.0});
}

CrossSection CrossSection::box(double w1, double w2) {
  if (!positive_finite(w1) || !positive_finite(w2))
    throw InvalidArgument(fmt::format("box widths must be > 0, got {} x {}", w1, w2));
  return CrossSection(2, {w1, w2});
}

double CrossSection::measure() const {
  return is_interval() ? widths_[0] : widths_[0] * widths_[1];
}

// --- CylinderGrid ----------------------------------------------------------------

CylinderGrid::CylinderGrid(CrossSection cross_section, double L, int n1, int n2,
                           int nz, Mode mode)
    : cs_(cross_section), L_(L), n1_(n1), n2_(n2), nz_(nz), mode_(mode) {
  if (!positive_finite(L)) throw InvalidArgument(fmt::format("L must be > 0, got {}", L));
  if (n1 < 1 || n2 < 1 || nz < 2)
    throw InvalidArgument(fmt::format("invalid cell counts {} x {} x {}", n1, n2, nz));
  if (cs_.is_interval() && n2 != 1)
    throw InvalidArgument("an interval cross-section needs exactly one x2 cell");
  if (mode == Mode::Full && nz % 2 != 0)
    throw InvalidArgument(fmt::format("full mode needs an even axial count, got {}", nz));
  h1_ = cs_.width(0) / n1;
  h2_ = cs_.is_interval() ? 1.0 : cs_.width(1) / n2;
  hz_ = (mode == Mode::Full ? 2.0 * L : L) / nz;
  cells_ = static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2) *
           static_cast<std::size_t>(nz);
}

double CylinderGrid::h() const {
  return dimension() == 2 ? std::min(h1_, hz_) : std::min({h1_, h2_, hz_});
}

double CylinderGrid::cell_volume() const {
  return dimension() == 2 ? h1_ * hz_ : h1_ * h2_ * hz_;
}

double CylinderGrid::facet_area(int axis) const {
  if (dimension() == 2) return axis == 0 ? hz_ : h1_;
  switch (axis) {
    case 0: return h2_ * hz_;
    case 1: return h1_ * hz_;
    default: return h1_ * h2_;
  }
}

CellCoord CylinderGrid::coord(std::size_t idx) const {
  const auto n1 = static_cast<std::size_t>(n1_);
  const auto n2 = static_cast<std::size_t>(n2_);
  CellCoord c;
  c.i = static_cast<int>(idx % n1);
  idx /= n1;
  c.j = static_cast<int>(idx % n2);
  c.k = static_cast<int>(idx / n2);
  return c;
}

Point CylinderGrid::center(std::size_t idx) const {
  const CellCoord c = coord(idx);
  Point p;
  p.x1 = (c.i + 0.5) * h1_;
  p.x2 = dimension() == 3 ? (c.j + 0.5) * h2_ : 0.0;
  p.z = z_center(c.k);
  return p;
}

std::size_t CylinderGrid::padded_size() const {
  const std::size_t p2 = dimension() == 3 ? static_cast<std::size_t>(n2_ + 2) : 1;
  return static_cast<std::size_t>(n1_ + 2) * p2 * static_cast<std::size_t>(nz_ + 2);
}

std::size_t CylinderGrid::padded_index(int i, int j, int k) const {
  const std::size_t p1 = static_cast<std::size_t>(n1_ + 2);
  if (dimension() == 2)
    return static_cast<std::size_t>(k + 1) * p1 + static_cast<std::size_t>(i + 1);
  const std::size_t p2 = static_cast<std::size_t>(n2_ + 2);
  return (static_cast<std::size_t>(k + 1) * p2 + static_cast<std::size_t>(j + 1)) * p1 +
         static_cast<std::size_t>(i + 1);
}

std::ptrdiff_t CylinderGrid::padded_stride(int axis) const {
  const std::ptrdiff_t p1 = n1_ + 2;
  if (axis == 0) return 1;
  if (dimension() == 2) return axis == 2 ? p1 : 0;
  return axis == 1 ? p1 : p1 * (n2_ + 2);
}

CylinderGrid build_grid(const CrossSection& cross_section, double L,
                        double resolution, Mode mode) {
  if (!positive_finite(L)) throw InvalidArgument(fmt::format("L must be > 0, got {}", L));
  if (!positive_finite(resolution))
    throw InvalidArgument(fmt::format("resolution must be > 0, got {}", resolution));
  auto transverse = [&](double w) {
    const long n = std::lround(w * resolution);
    if (n < 8)
      throw InvalidArgument(fmt::format(
          "resolution {} gives {} cells across width {}; need >= 8", resolution, n, w));
    return static_cast<int>(n);
  };
  const int n1 = transverse(cross_section.width(0));
  const int n2 = cross_section.is_interval() ? 1 : transverse(cross_section.width(1));
  const double length = mode == Mode::Full ? 2.0 * L : L;
  long nz = static_cast<long>(std::ceil(length * resolution - 1e-9));
  if (mode == Mode::Full && nz % 2 != 0) ++nz;
  if (nz < 8)
    throw InvalidArgument(fmt::format("axial length {} at resolution {} gives {} cells; need >= 8",
                                      length, resolution, nz));
  return CylinderGrid(cross_section, L, n1, n2, static_cast<int>(nz), mode);
}

// --- DomainMask ------------------------------------------------------------------

DomainMask::DomainMask(CylinderGrid grid)
    : grid_(std::move(grid)), inside_(grid_.cell_count(), 0) {}

DomainMask::DomainMask(CylinderGrid grid, std::vector<std::uint8_t> inside)
    : grid_(std::move(grid)), inside_(std::move(inside)) {
  if (inside_.size() != grid_.cell_count())
    throw InvalidArgument(fmt::format("mask has {} cells, grid has {}", inside_.size(),
                                      grid_.cell_count()));
  for (std::size_t idx = 0; idx < inside_.size(); ++idx) {
    if (!inside_[idx]) continue;
    inside_[idx] = 1;
    ++count_;
    if (!grid_.eligible(idx))
      throw InfeasibleGeometry(fmt::format(
          "mask reaches the cap layer at axial index {}", grid_.coord(idx).k));
  }
}

std::vector<std::size_t> DomainMask::inside_indices() const {
  std::vector<std::size_t> out;
  out.reserve(count_);
  for (std::size_t idx = 0; idx < inside_.size(); ++idx)
    if (inside_[idx]) out.push_back(idx);
  return out;
}

void DomainMask::set(std::size_t idx, bool value) {
  if (value && !grid_.eligible(idx))
    throw InfeasibleGeometry(fmt::format("cell {} lies in the cap layer", idx));
  const std::uint8_t v = value ? 1 : 0;
  if (inside_[idx] == v) return;
  inside_[idx] = v;
  if (value)
    ++count_;
  else
    --count_;
}

// --- shapes -----------------------------------------------------------------------

namespace {

/// Largest |z| (or z in half mode) a shape may reach and still leave the cap
/// layer empty.
double axial_limit(const CylinderGrid& g) { return g.half_length() - g.hz(); }

void check_axial_extent(const CylinderGrid& g, double lo, double hi, const char* what) {
  const double lim = axial_limit(g);
  const double floor = g.half() ? -std::numeric_limits<double>::infinity() : -lim;
  if (hi > lim + kFitSlack || lo < floor - kFitSlack)
    throw InfeasibleGeometry(fmt::format(
        "{} spans z in [{}, {}] but the truncation allows [{}, {}]", what, lo, hi,
        g.half() ? 0.0 : -lim, lim));
}

DomainMask fill(const CylinderGrid& g, const std::function<bool(const Point&)>& pred) {
  std::vector<std::uint8_t> inside(g.cell_count(), 0);
  for (std::size_t idx = 0; idx < g.cell_count(); ++idx)
    inside[idx] = pred(g.center(idx)) ? 1 : 0;
  return DomainMask(g, std::move(inside));
}

double sq(double x) { return x * x; }

}  // namespace

DomainMask mask_from_shape(const CylinderGrid& g, const Shape& shape) {
  const CrossSection& cs = g.cross_section();
  const bool three_d = g.dimension() == 3;
  const double mid2 = three_d ? 0.5 * cs.width(1) : 0.0;

  if (const auto* s = std::get_if<BoundedCylinder>(&shape)) {
    if (!positive_finite(s->h)) throw InvalidArgument(fmt::format("height must be > 0, got {}", s->h));
    check_axial_extent(g, -0.5 * s->h, 0.5 * s->h, "bounded cylinder");
    const double half_h = 0.5 * s->h;
    return fill(g, [half_h](const Point& p) { return std::abs(p.z) < half_h; });
  }
  if (const auto* s = std::get_if<HalfDisk>(&shape)) {
    if (!positive_finite(s->r)) throw InvalidArgument(fmt::format("radius must be > 0, got {}", s->r));
    if (s->r > cs.width(0) + kFitSlack)
      throw InfeasibleGeometry(fmt::format("half-disk radius {} exceeds the width {}", s->r,
                                           cs.width(0)));
    if (three_d && s->r > mid2 + kFitSlack)
      throw InfeasibleGeometry(fmt::format("half-ball radius {} exceeds half the x2 width {}", s->r, mid2));
    check_axial_extent(g, s->z0 - s->r, s->z0 + s->r, "half-disk");
    const double xw = s->wall == Wall::Left ? 0.0 : cs.width(0);
    const HalfDisk d = *s;
    return fill(g, [d, xw, mid2](const Point& p) {
      return sq(p.x1 - xw) + sq(p.x2 - mid2) + sq(p.z - d.z0) < d.r * d.r;
    });
  }
  if (const auto* s = std::get_if<Disk>(&shape)) {
    if (!positive_finite(s->r)) throw InvalidArgument(fmt::format("radius must be > 0, got {}", s->r));
    const Point c = s->center;
    auto outside = [&](double x, double w) {
      return x - s->r < -kFitSlack || x + s->r > w + kFitSlack;
    };
    if (outside(c.x1, cs.width(0)) || (three_d && outside(c.x2, cs.width(1))))
      throw InfeasibleGeometry("disk leaves the cross-section");
    check_axial_extent(g, c.z - s->r, c.z + s->r, "disk");
    const double r = s->r;
    return fill(g, [c, r](const Point& p) {
      return sq(p.x1 - c.x1) + sq(p.x2 - c.x2) + sq(p.z - c.z) < r * r;
    });
  }
  const auto& custom = std::get<CustomShape>(shape);
  if (!custom.inside) throw InvalidArgument("custom shape without a predicate");
  for (std::size_t idx = 0; idx < g.cell_count(); ++idx)
    if (!g.eligible(idx) && custom.inside(g.center(idx)))
      throw InfeasibleGeometry("custom shape reaches the cap layer");
  return fill(g, custom.inside);
}

double volume(const DomainMask& mask) { return mask.volume(); }

DomainMask unite(const DomainMask& a, const DomainMask& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("masks live on different grids");
  std::vector<std::uint8_t> inside(a.cells().begin(), a.cells().end());
  for (std::size_t idx = 0; idx < inside.size(); ++idx) inside[idx] |= b.cells()[idx];
  return DomainMask(a.grid(), std::move(inside));
}

bool disjoint(const DomainMask& a, const DomainMask& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("masks live on different grids");
  for (std::size_t idx = 0; idx < a.cells().size(); ++idx)
    if (a.cells()[idx] && b.cells()[idx]) return false;
  return true;
}

DomainMask steiner_symmetrize(const DomainMask& mask) {
  const CylinderGrid& g = mask.grid();
  if (g.half()) throw InvalidArgument("Steiner symmetrization needs full-cylinder mode");
  std::vector<std::uint8_t> out(g.cell_count(), 0);
  const int origin = g.axial_origin();
  for (int j = 0; j < g.n2(); ++j) {
    for (int i = 0; i < g.n1(); ++i) {
      int m = 0;
      for (int k = 0; k < g.nz(); ++k) m += mask.contains(g.index(i, j, k)) ? 1 : 0;
      for (int s = -(m / 2); s <= (m + 1) / 2 - 1; ++s) out[g.index(i, j, origin + s)] = 1;
    }
  }
  return DomainMask(g, std::move(out));
}

DomainMask scale_axial(const DomainMask& mask, int t) {
  if (t < 1) throw InvalidArgument(fmt::format("axial scale factor must be >= 1, got {}", t));
  const CylinderGrid& g = mask.grid();
  const int origin = g.axial_origin();
  std::vector<std::uint8_t> out(g.cell_count(), 0);
  for (std::size_t idx : mask.inside_indices()) {
    const CellCoord c = g.coord(idx);
    const int s = c.k - origin;
    for (int r = 0; r < t; ++r) {
      const int k = origin + s * t + r;
      if (k < 0 || k >= g.nz() || g.in_cap_layer(k))
        throw InfeasibleGeometry(fmt::format("axial scaling by {} reaches the cap layer", t));
      out[g.index(c.i, c.j, k)] = 1;
    }
  }
  return DomainMask(g, std::move(out));
}

// --- boundary ---------------------------------------------------------------------

BoundarySegments boundary_decompose(const DomainMask& mask) {
  const CylinderGrid& g = mask.grid();
  BoundarySegments b;
  const int dims = g.dimension();
  const std::array<int, 3> counts{g.n1(), g.n2(), g.nz()};
  for (std::size_t idx : mask.inside_indices()) {
    const CellCoord c = g.coord(idx);
    const std::array<int, 3> pos{c.i, c.j, c.k};
    for (int axis = 0; axis < 3; ++axis) {
      if (dims == 2 && axis == 1) continue;
      const double area = g.facet_area(axis);
      for (int side : {-1, +1}) {
        std::array<int, 3> nb = pos;
        nb[static_cast<std::size_t>(axis)] += side;
        const int n = nb[static_cast<std::size_t>(axis)];
        if (n < 0 || n >= counts[static_cast<std::size_t>(axis)]) {
          // On the container boundary. The caps are unreachable (clearance),
          // so this is a lateral wall or the half-mode base.
          b.wall.push_back({idx, axis, side});
          b.wall_measure += area;
          if (axis == 2)
            b.base_contact += area;
          else
            b.lateral_contact[static_cast<std::size_t>(axis)][side < 0 ? 0 : 1] += area;
          continue;
        }
        if (!mask.contains(g.index(nb[0], nb[1], nb[2]))) {
          b.free.push_back({idx, axis, side});
          b.free_measure += area;
        }
      }
    }
  }
  return b;
}

std::vector<double> distance_to_free_boundary(const DomainMask& mask, double max_distance) {
  const CylinderGrid& g = mask.grid();
  std::vector<double> dist(g.cell_count(), std::numeric_limits<double>::infinity());
  const BoundarySegments b = boundary_decompose(mask);
  const bool three_d = g.dimension() == 3;
  const std::array<double, 3> h{g.h1(), g.h2(), g.hz()};
  const std::array<int, 3> reach{
      static_cast<int>(std::ceil(max_distance / g.h1())) + 1,
      three_d ? static_cast<int>(std::ceil(max_distance / g.h2())) + 1 : 0,
      static_cast<int>(std::ceil(max_distance / g.hz())) + 1};
  for (const Facet& f : b.free) {
    const CellCoord c = g.coord(f.cell);
    const Point pc = g.center(f.cell);
    std::array<double, 3> fc{pc.x1, pc.x2, pc.z};
    fc[static_cast<std::size_t>(f.axis)] += 0.5 * f.side * h[static_cast<std::size_t>(f.axis)];
    for (int dk = -reach[2]; dk <= reach[2]; ++dk) {
      const int k = c.k + dk;
      if (k < 0 || k >= g.nz()) continue;
      for (int dj = -reach[1]; dj <= reach[1]; ++dj) {
        const int j = c.j + dj;
        if (j < 0 || j >= g.n2()) continue;
        for (int di = -reach[0]; di <= reach[0]; ++di) {
          const int i = c.i + di;
          if (i < 0 || i >= g.n1()) continue;
          const std::size_t idx = g.index(i, j, k);
          if (!mask.contains(idx)) continue;
          const Point p = g.center(idx);
          const std::array<double, 3> q{p.x1, p.x2, p.z};
          double d2 = 0.0;
          for (int axis = 0; axis < 3; ++axis) {
            if (!three_d && axis == 1) continue;
            const auto a = static_cast<std::size_t>(axis);
            double delta = q[a] - fc[a];
            if (axis != f.axis) {
              // The facet extends half a cell either side in its tangent axes.
              delta = std::max(0.0, std::abs(delta) - 0.5 * h[a]);
            }
            d2 += delta * delta;
          }
          const double d = std::sqrt(d2);
          if (d <= max_distance) dist[idx] = std::min(dist[idx], d);
        }
      }
    }
  }
  return dist;
}

Connectivity connectedness_check(const DomainMask& mask) {
  const CylinderGrid& g = mask.grid();
  std::vector<int> label(g.cell_count(), -1);
  std::vector<std::size_t> stack;
  Connectivity result;
  const int dims = g.dimension();
  for (std::size_t seed : mask.inside_indices()) {
    if (label[seed] >= 0) continue;
    const int id = result.components++;
    label[seed] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      const CellCoord c = g.coord(idx);
      auto visit = [&](int i, int j, int k) {
        if (i < 0 || i >= g.n1() || j < 0 || j >= g.n2() || k < 0 || k >= g.nz()) return;
        const std::size_t n = g.index(i, j, k);
        if (mask.contains(n) && label[n] < 0) {
          label[n] = id;
          stack.push_back(n);
        }
      };
      visit(c.i - 1, c.j, c.k);
      visit(c.i + 1, c.j, c.k);
      if (dims == 3) {
        visit(c.i, c.j - 1, c.k);
        visit(c.i, c.j + 1, c.k);
      }
      visit(c.i, c.j, c.k - 1);
      visit(c.i, c.j, c.k + 1);
    }
  }
  result.connected = result.components == 1;
  return result;
}

}  // namespace cylt
