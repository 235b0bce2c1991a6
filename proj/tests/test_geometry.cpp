#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "cyltorsion/error.hpp"
#include "cyltorsion/geometry.hpp"
#include "cyltorsion/oracles.hpp"
#include "cyltorsion/rng.hpp"

using namespace cylt;
using cylt::oracles::kPi;

namespace {

const CrossSection kUnit = CrossSection::interval(1.0);

DomainMask random_eligible_mask(const CylinderGrid& g, Rng& rng, double p) {
  DomainMask m(g);
  for (std::size_t i = 0; i < g.cell_count(); ++i)
    if (g.eligible(i) && rng.uniform() < p) m.set(i, true);
  return m;
}

std::vector<double> circle_sdf(const CylinderGrid& g, double cx, double cz, double r) {
  std::vector<double> d(g.cell_count());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Point p = g.center(i);
    d[i] = std::hypot(p.x1 - cx, p.z - cz) - r;
  }
  return d;
}

int column_signed(const CylinderGrid& g, int k) { return k - g.axial_origin(); }

}  // namespace

TEST_CASE("build_grid examples") {
  const CylinderGrid g = build_grid(kUnit, 2.0, 64, Mode::Full);
  CHECK(g.n1() == 64);
  CHECK(g.nz() == 256);
  CHECK(g.h1() == doctest::Approx(1.0 / 64));
  CHECK(g.hz() == doctest::Approx(1.0 / 64));
  const CylinderGrid h = build_grid(kUnit, 2.0, 64, Mode::Half);
  CHECK(h.nz() == 128);
  CHECK(h.z_min() == 0.0);
  CHECK(h.z_center(h.nz() - 1) + 0.5 * h.hz() == doctest::Approx(2.0));
  CHECK_THROWS_AS(build_grid(kUnit, 0.0, 64, Mode::Full), InvalidArgument);
  CHECK_THROWS_AS(build_grid(kUnit, 2.0, -1, Mode::Full), InvalidArgument);
  CHECK_THROWS_AS(build_grid(kUnit, 2.0, 4, Mode::Full), InvalidArgument);
}

TEST_CASE("grid invariants: even axial count and exact total volume") {
  for (double res : {13.0, 16.0, 50.0, 64.0}) {
    for (double L : {0.7, 1.0, 2.0}) {
      const CylinderGrid f = build_grid(kUnit, L, res, Mode::Full);
      CHECK(f.nz() % 2 == 0);
      CHECK(f.total_volume() == doctest::Approx(2.0 * L).epsilon(1e-14));
      const CylinderGrid h = build_grid(kUnit, L, res, Mode::Half);
      CHECK(h.total_volume() == doctest::Approx(L).epsilon(1e-14));
    }
  }
  const CylinderGrid b = build_grid(CrossSection::box(1.0, 0.5), 1.0, 16, Mode::Full);
  CHECK(b.dimension() == 3);
  CHECK(b.total_volume() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("mask_from_shape examples") {
  const CylinderGrid g = build_grid(kUnit, 2.0, 64, Mode::Full);
  const DomainMask rect = mask_from_shape(g, BoundedCylinder{1.0});
  CHECK(rect.cell_count() == 64u * 64u);
  CHECK(rect.volume() == 1.0);

  const double r = 0.3;
  const DomainMask hd = mask_from_shape(g, HalfDisk{Wall::Left, r, 0.0});
  const double perimeter = kPi * r + 2 * r;
  CHECK(std::abs(hd.volume() - kPi * r * r / 2) <= 2 * perimeter * g.h());

  CHECK_THROWS_AS(mask_from_shape(g, HalfDisk{Wall::Left, 1.5, 0.0}), InfeasibleGeometry);
  // Reaching the cap layer is infeasible even if the shape is inside [-L, L].
  CHECK_THROWS_AS(mask_from_shape(g, BoundedCylinder{3.99}), InfeasibleGeometry);
  CHECK_THROWS_AS(mask_from_shape(g, CustomShape{[](const Point& p) { return p.z > 1.9; }}),
                  InfeasibleGeometry);
}

TEST_CASE("volume is exact counting and additive") {
  const CylinderGrid g = build_grid(kUnit, 1.0, 32, Mode::Full);
  CHECK(volume(DomainMask(g)) == 0.0);
  const DomainMask a = mask_from_shape(g, Disk{{0.25, 0, 0.5}, 0.2});
  const DomainMask b = mask_from_shape(g, Disk{{0.75, 0, -0.5}, 0.2});
  REQUIRE(disjoint(a, b));
  CHECK(volume(unite(a, b)) == volume(a) + volume(b));
}

TEST_CASE("Steiner symmetrization of single columns") {
  const CylinderGrid g(kUnit, 1.0, 8, 1, 20, Mode::Full);
  const int o = g.axial_origin();
  DomainMask m(g);
  for (int s : {2, 3, 7}) m.set(g.index(0, 0, o + s), true);
  for (int s : {5, 6, 7, 8}) m.set(g.index(1, 0, o + s), true);
  const DomainMask out = steiner_symmetrize(m);
  std::vector<int> col0, col1;
  for (int k = 0; k < g.nz(); ++k) {
    if (out.contains(g.index(0, 0, k))) col0.push_back(column_signed(g, k));
    if (out.contains(g.index(1, 0, k))) col1.push_back(column_signed(g, k));
  }
  CHECK(col0 == std::vector<int>{-1, 0, 1});
  CHECK(col1 == std::vector<int>{-2, -1, 0, 1});
  CHECK(out.volume() == m.volume());

  const CylinderGrid h(kUnit, 1.0, 8, 1, 10, Mode::Half);
  CHECK_THROWS_AS(steiner_symmetrize(DomainMask(h)), InvalidArgument);
}

TEST_CASE("Steiner symmetrization: count preserved, axially convex, idempotent") {
  Rng rng(42);
  const CylinderGrid g(kUnit, 1.0, 12, 1, 24, Mode::Full);
  for (int trial = 0; trial < 200; ++trial) {
    const DomainMask m = random_eligible_mask(g, rng, rng.uniform(0.05, 0.8));
    const DomainMask s = steiner_symmetrize(m);
    CHECK(s.cell_count() == m.cell_count());
    CHECK(steiner_symmetrize(s) == s);
    for (int i = 0; i < g.n1(); ++i) {
      int first = -1, last = -1, count = 0;
      for (int k = 0; k < g.nz(); ++k) {
        if (!s.contains(g.index(i, 0, k))) continue;
        if (first < 0) first = k;
        last = k;
        ++count;
      }
      if (count > 0) CHECK(last - first + 1 == count);
    }
  }
}

TEST_CASE("scale_axial") {
  const CylinderGrid g = build_grid(kUnit, 1.0, 32, Mode::Full);
  const DomainMask half = mask_from_shape(g, BoundedCylinder{0.5});
  CHECK(scale_axial(half, 1) == half);
  const DomainMask twice = scale_axial(half, 2);
  CHECK(twice == mask_from_shape(g, BoundedCylinder{1.0}));
  CHECK(twice.volume() == 2 * half.volume());
  Rng rng(3);
  const CylinderGrid big(kUnit, 1.0, 8, 1, 60, Mode::Full);
  for (int trial = 0; trial < 20; ++trial) {
    DomainMask m(big);
    for (int k = big.axial_origin() - 6; k < big.axial_origin() + 6; ++k)
      for (int i = 0; i < 8; ++i)
        if (rng.uniform() < 0.4) m.set(big.index(i, 0, k), true);
    CHECK(scale_axial(m, 3).cell_count() == 3 * m.cell_count());
  }
  CHECK_THROWS_AS(scale_axial(mask_from_shape(g, BoundedCylinder{1.0}), 3), InfeasibleGeometry);
  CHECK_THROWS_AS(scale_axial(half, 0), InvalidArgument);
}

TEST_CASE("boundary_decompose examples") {
  const CylinderGrid g = build_grid(kUnit, 2.0, 64, Mode::Full);
  const BoundarySegments rect = boundary_decompose(mask_from_shape(g, BoundedCylinder{1.0}));
  CHECK(rect.free_measure == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rect.wall_measure == doctest::Approx(2.0).epsilon(1e-14));

  DomainMask one(g);
  one.set(g.index(20, 0, 100), true);
  const BoundarySegments b1 = boundary_decompose(one);
  CHECK(b1.free_measure == doctest::Approx(4 * g.h()));
  CHECK(b1.wall_measure == 0.0);

  const double r = 0.3;
  const BoundarySegments hd = boundary_decompose(mask_from_shape(g, HalfDisk{Wall::Left, r, 0.0}));
  CHECK(std::abs(hd.wall_measure - 2 * r) <= 2 * g.h());
  CHECK(hd.lateral_contact[0][0] == hd.wall_measure);
  CHECK(hd.lateral_contact[0][1] == 0.0);
}

TEST_CASE("boundary facets partition the mask boundary") {
  Rng rng(5);
  for (Mode mode : {Mode::Full, Mode::Half}) {
    const CylinderGrid g(kUnit, 1.0, 10, 1, 16, mode);
    for (int trial = 0; trial < 50; ++trial) {
      const DomainMask m = random_eligible_mask(g, rng, 0.4);
      std::size_t faces = 0;
      for (std::size_t idx : m.inside_indices()) {
        const CellCoord c = g.coord(idx);
        const int nb[4][2] = {{c.i - 1, c.k}, {c.i + 1, c.k}, {c.i, c.k - 1}, {c.i, c.k + 1}};
        for (const auto& n : nb) {
          const bool out_of_grid = n[0] < 0 || n[0] >= g.n1() || n[1] < 0 || n[1] >= g.nz();
          if (out_of_grid || !m.contains(g.index(n[0], 0, n[1]))) ++faces;
        }
      }
      const BoundarySegments b = boundary_decompose(m);
      CHECK(b.free.size() + b.wall.size() == faces);
      for (const Facet& f : b.wall)
        for (const Facet& q : b.free)
          CHECK_FALSE((f.cell == q.cell && f.axis == q.axis && f.side == q.side));
    }
  }
}

TEST_CASE("half mode counts the base plane as wall") {
  const CylinderGrid g = build_grid(kUnit, 1.0, 32, Mode::Half);
  const BoundarySegments b = boundary_decompose(mask_from_shape(g, BoundedCylinder{1.0}));
  CHECK(b.base_contact == doctest::Approx(1.0));
  CHECK(b.free_measure == doctest::Approx(1.0));
  CHECK(b.wall_measure == doctest::Approx(1.0 + 2 * 0.5));
}

TEST_CASE("contour_length examples") {
  const CylinderGrid g = build_grid(kUnit, 1.0, 128, Mode::Full);
  const double r = 0.3;
  CHECK(contour_length(g, circle_sdf(g, 0.5, 0.0, r), 0.0) ==
        doctest::Approx(2 * kPi * r).epsilon(0.01));
  CHECK(contour_length(g, circle_sdf(g, 0.0, 0.0, r), 0.0) == doctest::Approx(kPi * r).epsilon(0.02));

  std::vector<double> sq(g.cell_count());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const Point p = g.center(i);
    sq[i] = std::max(std::abs(p.x1 - 0.5), std::abs(p.z)) - 0.25;
  }
  CHECK(contour_length(g, sq, 0.0) == doctest::Approx(2.0).epsilon(0.02));
  CHECK_THROWS_AS(contour_length(g, std::vector<double>(g.cell_count(), 1.0), 0.0), InvalidArgument);
}

TEST_CASE("contour_length converges at first order or better") {
  const double r = 0.3, exact = 2 * kPi * r;
  double prev = 0.0;
  for (double res : {32.0, 64.0, 128.0}) {
    const CylinderGrid g = build_grid(kUnit, 1.0, res, Mode::Full);
    // Off-centre so the circle does not align with the grid.
    const double err = std::abs(contour_length(g, circle_sdf(g, 0.47, 0.013, r), 0.0) - exact);
    if (prev > 0.0) CHECK(err <= 0.5 * prev + 1e-12);
    prev = err;
  }
}

TEST_CASE("connectedness_check") {
  const CylinderGrid g = build_grid(kUnit, 1.0, 32, Mode::Full);
  const Connectivity rect = connectedness_check(mask_from_shape(g, BoundedCylinder{0.5}));
  CHECK(rect.connected);
  CHECK(rect.components == 1);
  const DomainMask two = unite(mask_from_shape(g, Disk{{0.25, 0, 0.5}, 0.2}),
                               mask_from_shape(g, Disk{{0.75, 0, -0.5}, 0.2}));
  const Connectivity c2 = connectedness_check(two);
  CHECK_FALSE(c2.connected);
  CHECK(c2.components == 2);
  const Connectivity c0 = connectedness_check(DomainMask(g));
  CHECK_FALSE(c0.connected);
  CHECK(c0.components == 0);
}

TEST_CASE("mask text format round trip") {
  for (Mode mode : {Mode::Full, Mode::Half}) {
    const CylinderGrid g = build_grid(CrossSection::interval(1.5), 1.0, 16, mode);
    Rng rng(9);
    const DomainMask m = random_eligible_mask(g, rng, 0.3);
    std::stringstream ss;
    write_mask(ss, m);
    const DomainMask back = read_mask(ss);
    CHECK(back.grid() == g);
    CHECK(back == m);
  }
  std::istringstream bad("grid 4 4 0.25 1 1 sideways\n");
  CHECK_THROWS_AS(read_mask(bad), InvalidArgument);
}

TEST_CASE("distance to the free boundary of a flat strip") {
  const CylinderGrid g = build_grid(kUnit, 1.0, 32, Mode::Full);
  const DomainMask m = mask_from_shape(g, BoundedCylinder{0.5});
  const auto d = distance_to_free_boundary(m, 1.0);
  for (std::size_t i : m.inside_indices())
    CHECK(d[i] == doctest::Approx(0.25 - std::abs(g.center(i).z)).epsilon(1e-12));
}
