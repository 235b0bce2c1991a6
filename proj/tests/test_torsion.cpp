#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "cyltorsion/error.hpp"
#include "cyltorsion/geometry.hpp"
#include "cyltorsion/oracles.hpp"
#include "cyltorsion/rng.hpp"
#include "cyltorsion/torsion.hpp"

using namespace cylt;
using cylt::oracles::kPi;

namespace {

const CrossSection kUnit = CrossSection::interval(1.0);

DomainMask random_eligible_mask(const CylinderGrid& g, Rng& rng, double p) {
  DomainMask m(g);
  for (std::size_t i = 0; i < g.cell_count(); ++i)
    if (g.eligible(i) && rng.uniform() < p) m.set(i, true);
  if (m.empty()) m.set(g.index(0, 0, g.nz() / 2), true);
  return m;
}

double rect_energy_error(double res) {
  const CylinderGrid g = build_grid(kUnit, 2.0, res, Mode::Full);
  const TorsionSolution s = solve_torsion(g, mask_from_shape(g, BoundedCylinder{1.0}));
  return std::abs(s.energy - (-1.0 / 24.0));
}

}  // namespace

TEST_CASE("flat cylinder h = 1: max u and energy") {
  const CylinderGrid g = build_grid(kUnit, 2.0, 128, Mode::Full);
  const TorsionSolution s = solve_torsion(g, mask_from_shape(g, BoundedCylinder{1.0}));
  CHECK(s.u.max() == doctest::Approx(0.125).epsilon(0.01));
  CHECK(s.energy == doctest::Approx(-1.0 / 24.0).epsilon(0.01));
  CHECK(s.residual <= 1e-10);
}

TEST_CASE("flat strip solution is the parabola shifted by hz^2/8") {
  // With the half-cell Dirichlet closure the 1-D scheme is exact for the
  // parabola whose zero lies half a cell beyond the last centre:
  // u_k = ((h/2)^2 - z_k^2)/2 + hz^2/8 at every inside centre.
  const CylinderGrid g = build_grid(kUnit, 1.0, 32, Mode::Full);
  const double h = 0.5;
  const TorsionSolution s = solve_torsion(g, mask_from_shape(g, BoundedCylinder{h}), 1e-13);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const double z = g.center(i).z;
    const double expect = std::abs(z) < h / 2 ? 0.5 * (h * h / 4 - z * z) + g.hz() * g.hz() / 8 : 0.0;
    CHECK(s.u[i] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("energy of the flat cylinder h = 0.5") {
  const CylinderGrid g = build_grid(kUnit, 1.0, 128, Mode::Full);
  const TorsionSolution s = solve_torsion(g, mask_from_shape(g, BoundedCylinder{0.5}));
  CHECK(s.energy == doctest::Approx(-0.125 / 24).epsilon(0.01));
  CHECK(energy_of(s) == s.energy);
}

TEST_CASE("grid convergence of the flat-cylinder energy") {
  const double e64 = rect_energy_error(64), e128 = rect_energy_error(128);
  CHECK(e64 / e128 >= 1.8);
}

TEST_CASE("analytic field: values and midpoint quadrature") {
  const CylinderGrid g(kUnit, 2.0, 8, 1, 8, Mode::Full);  // hz = 0.5, centres at +-0.25, +-0.75
  const ScalarField u = analytic_rect_field(g, 1.0);
  const int o = g.axial_origin();
  CHECK(u[g.index(0, 0, o)] == doctest::Approx(3.0 / 32));  // x_N = h/4
  CHECK(u[g.index(0, 0, o + 1)] == 0.0);                    // x_N = 0.75 is outside

  // Midpoint rule on the parabola: sum = integral + h hz^2 / 24, so the mass
  // form is -h^3/24 - h hz^2/48 exactly.
  const CylinderGrid f = build_grid(kUnit, 1.0, 64, Mode::Full);
  const double h = 1.0;
  const ScalarField v = analytic_rect_field(f, h);
  const EnergyForms e = energy_forms(v, mask_from_shape(f, BoundedCylinder{h}));
  CHECK(e.mass == doctest::Approx(-h * h * h / 24 - h * f.hz() * f.hz() / 48).epsilon(1e-12));
  CHECK_THROWS_AS(analytic_rect_field(f, 2.0), InfeasibleGeometry);
}

TEST_CASE("zero field has zero energy") {
  const CylinderGrid g = build_grid(kUnit, 1.0, 16, Mode::Full);
  const EnergyForms e = energy_forms(ScalarField(g), DomainMask(g));
  CHECK(e.mass == 0.0);
  CHECK(e.dirichlet == 0.0);
  CHECK_THROWS_AS(solve_torsion(g, DomainMask(g)), InvalidArgument);
}

TEST_CASE("solver outputs: maximum principle and energy-form consistency") {
  Rng rng(17);
  for (Mode mode : {Mode::Full, Mode::Half}) {
    const CylinderGrid g(kUnit, 1.0, 16, 1, 24, mode);
    for (int trial = 0; trial < 30; ++trial) {
      const DomainMask m = random_eligible_mask(g, rng, rng.uniform(0.1, 0.9));
      const TorsionSolution s = solve_torsion(g, m);
      CHECK(s.energy < 0.0);
      for (std::size_t i = 0; i < g.cell_count(); ++i) {
        if (m.contains(i))
          CHECK(s.u[i] > 0.0);
        else
          CHECK(s.u[i] == 0.0);
      }
      CHECK(std::abs(s.energy_dirichlet - s.energy_mass) <= s.energy_consistency_bound);
    }
  }
}

TEST_CASE("energy is additive over disjoint masks") {
  const CylinderGrid g = build_grid(kUnit, 1.0, 64, Mode::Full);
  const DomainMask a = mask_from_shape(g, Disk{{0.3, 0, 0.45}, 0.2});
  const DomainMask b = mask_from_shape(g, HalfDisk{Wall::Right, 0.3, -0.4});
  REQUIRE(disjoint(a, b));
  const double ea = solve_torsion(g, a, 1e-12).energy;
  const double eb = solve_torsion(g, b, 1e-12).energy;
  const double eu = solve_torsion(g, unite(a, b), 1e-12).energy;
  CHECK(eu == doctest::Approx(ea + eb).epsilon(1e-9));
}

TEST_CASE("domain monotonicity on nested random masks") {
  Rng rng(23);
  const CylinderGrid g(kUnit, 1.0, 12, 1, 20, Mode::Full);
  for (int trial = 0; trial < 50; ++trial) {
    const DomainMask small = random_eligible_mask(g, rng, 0.35);
    DomainMask big = small;
    for (std::size_t i = 0; i < g.cell_count(); ++i)
      if (g.eligible(i) && rng.uniform() < 0.3) big.set(i, true);
    const TorsionSolution s = solve_torsion(g, small, 1e-12);
    const TorsionSolution b = solve_torsion(g, big, 1e-12);
    CHECK(b.energy <= s.energy + 1e-12 * std::abs(s.energy));
    for (std::size_t i = 0; i < g.cell_count(); ++i) CHECK(s.u[i] <= b.u[i] + 1e-10);
  }
}

TEST_CASE("Steiner symmetrization does not raise the energy") {
  Rng rng(29);
  const CylinderGrid g(kUnit, 1.0, 16, 1, 32, Mode::Full);
  for (int trial = 0; trial < 50; ++trial) {
    const DomainMask m = random_eligible_mask(g, rng, rng.uniform(0.1, 0.6));
    const double e = solve_torsion(g, m).energy;
    const double es = solve_torsion(g, steiner_symmetrize(m)).energy;
    CHECK(es <= e + 0.02 * std::abs(e));
  }
}

TEST_CASE("half-cylinder solve mirrors the full-cylinder solve") {
  const CylinderGrid full = build_grid(kUnit, 1.0, 32, Mode::Full);
  const CylinderGrid half = build_grid(kUnit, 1.0, 32, Mode::Half);
  const DomainMask mf = mask_from_shape(full, HalfDisk{Wall::Left, 0.6, 0.0});
  const DomainMask mh = mask_from_shape(half, HalfDisk{Wall::Left, 0.6, 0.0});
  const TorsionSolution sf = solve_torsion(full, mf, 1e-13);
  const TorsionSolution sh = solve_torsion(half, mh, 1e-13);
  const int o = full.axial_origin();
  for (int k = 0; k < half.nz(); ++k) {
    for (int i = 0; i < half.n1(); ++i) {
      const double up = sf.u[full.index(i, 0, o + k)];
      const double down = sf.u[full.index(i, 0, o - 1 - k)];
      const double hv = sh.u[half.index(i, 0, k)];
      CHECK(std::abs(up - hv) <= 1e-9);
      CHECK(std::abs(down - hv) <= 1e-9);
    }
  }
  CHECK(sh.energy == doctest::Approx(0.5 * sf.energy).epsilon(1e-9));
}

TEST_CASE("field symmetrization: placement convention") {
  // Values at signed indices -3..2; ranks are placed at 0, -1, +1, -2, +2, -3.
  const CylinderGrid g(kUnit, 1.0, 8, 1, 8, Mode::Full);
  ScalarField u(g);
  const int o = g.axial_origin();
  const double in[6] = {0, 3, 1, 0, 2, 0};
  for (int s = -3; s <= 2; ++s) u[g.index(0, 0, o + s)] = in[s + 3];
  const ScalarField v = steiner_symmetrize(u);
  const double expect[6] = {0, 0, 2, 3, 1, 0};
  for (int s = -3; s <= 2; ++s) CHECK(v[g.index(0, 0, o + s)] == expect[s + 3]);

  ScalarField neg(g);
  neg[0] = -1.0;
  CHECK_THROWS_AS(steiner_symmetrize(neg), InvalidArgument);
  CHECK_THROWS_AS(steiner_symmetrize(ScalarField(build_grid(kUnit, 1.0, 8, Mode::Half))),
                  InvalidArgument);
}

TEST_CASE("field symmetrization commutes with mask symmetrization of level sets") {
  Rng rng(31);
  const CylinderGrid g(kUnit, 1.0, 10, 1, 16, Mode::Full);
  for (int trial = 0; trial < 20; ++trial) {
    ScalarField u(g);
    for (std::size_t i = 0; i < g.cell_count(); ++i)
      if (g.eligible(i)) u[i] = std::floor(rng.uniform(0.0, 4.0));
    const ScalarField v = steiner_symmetrize(u);
    for (double t : {0.5, 1.5, 2.5}) {
      DomainMask level(g), level_sym(g);
      for (std::size_t i = 0; i < g.cell_count(); ++i) {
        level.set(i, u[i] > t);
        level_sym.set(i, v[i] > t);
      }
      CHECK(steiner_symmetrize(level) == level_sym);
    }
  }
}

TEST_CASE("field symmetrization preserves column L2 and lowers axial Dirichlet sums") {
  Rng rng(37);
  const CylinderGrid g(kUnit, 1.0, 16, 1, 32, Mode::Full);
  for (int trial = 0; trial < 20; ++trial) {
    ScalarField u(g);
    for (double& x : u.values()) x = rng.uniform();
    const ScalarField v = steiner_symmetrize(u);
    for (int i = 0; i < g.n1(); ++i) {
      std::vector<double> a, b;
      for (int k = 0; k < g.nz(); ++k) {
        a.push_back(u[g.index(i, 0, k)]);
        b.push_back(v[g.index(i, 0, k)]);
      }
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      CHECK(a == b);  // same multiset, hence every L^p norm
      CHECK(axial_dirichlet_sum(v, i, 0) <= axial_dirichlet_sum(u, i, 0) + 1e-14);
    }
  }
}

TEST_CASE("boundary gradient on the flat cylinder") {
  const CylinderGrid g = build_grid(kUnit, 1.0, 64, Mode::Full);
  const DomainMask m = mask_from_shape(g, BoundedCylinder{1.0});
  const TorsionSolution s = solve_torsion(g, m);
  const GradientStats st = boundary_gradient_stats(s.u, m);
  CHECK(st.mean == doctest::Approx(0.5).epsilon(0.1));
  CHECK(st.c0_estimate == doctest::Approx(0.25).epsilon(0.2));
  CHECK(st.samples.size() == s.boundary_gradient.size());
}

TEST_CASE("boundary gradient on the half-disk gives C0 = c / (2 pi)") {
  const double c = 0.3, r = std::sqrt(2 * c / kPi);
  const CylinderGrid g = build_grid(kUnit, 1.0, 128, Mode::Full);
  const DomainMask m = mask_from_shape(g, HalfDisk{Wall::Left, r, 0.0});
  const TorsionSolution s = solve_torsion(g, m);
  CHECK(boundary_gradient_stats(s.u, m).c0_estimate == doctest::Approx(c / (2 * kPi)).epsilon(0.15));
  std::vector<double> phi(g.cell_count());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const Point p = g.center(i);
    phi[i] = std::hypot(p.x1, p.z) - r;
  }
  CHECK(boundary_gradient_stats(s.u, m, phi).c0_estimate ==
        doctest::Approx(c / (2 * kPi)).epsilon(0.15));
}

TEST_CASE("boundary gradient errors") {
  const CylinderGrid g = build_grid(kUnit, 1.0, 16, Mode::Full);
  DomainMask one(g);
  one.set(g.index(5, 0, 16), true);
  const TorsionSolution s = solve_torsion(g, one);
  CHECK(s.boundary_gradient.empty());
  CHECK_THROWS_AS(boundary_gradient_stats(s.u, one), InvalidArgument);
  CHECK_THROWS_AS(boundary_gradient_stats(s.u, one, Band{0.0, 1.0}), InvalidArgument);
}

TEST_CASE("nonconvergence reports the residual") {
  const CylinderGrid g = build_grid(kUnit, 1.0, 64, Mode::Full);
  SolveOptions o;
  o.tol = 1e-14;
  o.max_iterations = 3;
  try {
    solve_torsion(mask_from_shape(g, BoundedCylinder{1.0}), o);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.residual() > 1e-14);
    CHECK(e.iterations() == 3);
    CHECK(e.exit_code() == 3);
  }
}

TEST_CASE("warm start reaches the same solution in fewer iterations") {
  const CylinderGrid g = build_grid(kUnit, 1.0, 64, Mode::Full);
  const DomainMask m = mask_from_shape(g, HalfDisk{Wall::Left, 0.5, 0.0});
  const TorsionSolution cold = solve_torsion(g, m);
  SolveOptions o;
  o.initial = &cold.u;
  const TorsionSolution warm = solve_torsion(m, o);
  CHECK(warm.iterations < cold.iterations);
  CHECK(warm.energy == doctest::Approx(cold.energy).epsilon(1e-9));
}

TEST_CASE("three-dimensional box: flat cylinder energy") {
  const CylinderGrid g = build_grid(CrossSection::box(1.0, 0.5), 1.0, 24, Mode::Full);
  const TorsionSolution s = solve_torsion(g, mask_from_shape(g, BoundedCylinder{1.0}));
  CHECK(s.energy == doctest::Approx(-0.5 / 24).epsilon(0.01));
}

TEST_CASE("field output formats") {
  const CylinderGrid g = build_grid(kUnit, 1.0, 8, Mode::Full);
  const ScalarField u = analytic_rect_field(g, 1.0);
  std::ostringstream csv, vtk;
  write_field_csv(csv, u);
  const std::string text = csv.str();
  CHECK(text.rfind("x1,xN,value\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(g.cell_count()) + 1);
  write_field_vtk(vtk, u, "u");
  CHECK(vtk.str().find("DIMENSIONS 9 17 1") != std::string::npos);
  CHECK(vtk.str().find("CELL_DATA 128") != std::string::npos);
}
