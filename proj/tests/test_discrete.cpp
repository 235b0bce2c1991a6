#include "doctest.h"

#include <algorithm>

#include "cyltorsion/discrete_search.hpp"
#include "cyltorsion/torsion.hpp"

using namespace cylt;

namespace {

const CrossSection kUnit = CrossSection::interval(1.0);

double energy(const DomainMask& m) {
  SolveOptions o;
  o.tol = 1e-12;
  o.sample_gradient = false;
  return solve_torsion(m, o).energy;
}

}  // namespace

TEST_CASE("binomial") {
  CHECK(binomial(48, 6) == 12'271'512u);
  CHECK(binomial(48, 4) == 194'580u);
  CHECK(binomial(10, 0) == 1u);
  CHECK(binomial(10, 10) == 1u);
  CHECK(binomial(5, 7) == 0u);
  CHECK(binomial(67, 33) == 14'226'520'737'620'288'370u);
  CHECK(binomial(200, 100) == UINT64_MAX);
}

TEST_CASE("brute force refuses oversized enumerations and reports the count") {
  const CylinderGrid g(kUnit, 1.0, 6, 1, 8, Mode::Full);
  try {
    brute_force_min(g, 6, 1'000'000);
    FAIL("expected refusal");
  } catch (const EnumerationRefused& e) {
    CHECK(e.count() == 12'271'512u);
    CHECK(e.exit_code() == 2);
  }
}

TEST_CASE("2x2 half grid, k = 1: the base cells are the minimizers") {
  const CylinderGrid g(kUnit, 1.0, 2, 1, 2, Mode::Half);
  const BruteForceResult r = brute_force_min(g, 1);
  // Only the base layer is eligible; the top layer is the cap.
  CHECK(r.evaluated == 2u);
  CHECK(r.minimizers.size() == 2u);
  CHECK(g.coord(r.best.inside_indices().front()).k == 0);
  DomainMask base(g);
  base.set(g.index(0, 0, 0), true);
  CHECK(r.energy == doctest::Approx(energy(base)).epsilon(1e-12));
  CHECK(r.energy < 0.0);
}

TEST_CASE("brute force and swap search on a 6x8 grid") {
  const CylinderGrid g(kUnit, 1.0, 6, 1, 8, Mode::Full);
  const BruteForceResult bf = brute_force_min(g, 4);
  CHECK(bf.evaluated == binomial(36, 4));
  CHECK_FALSE(bf.minimizers.empty());
  CHECK(std::find(bf.minimizers.begin(), bf.minimizers.end(), bf.best) != bf.minimizers.end());
  for (const DomainMask& m : bf.minimizers) {
    CHECK(energy(m) == doctest::Approx(bf.energy).epsilon(1e-9));
    CHECK(connectedness_check(m).connected);
  }

  SUBCASE("swap from the optimum makes no move") {
    const SwapResult s = cell_swap_local_search(bf.best);
    CHECK(s.report.moves == 0);
    CHECK(s.mask == bf.best);
  }
  SUBCASE("swap from random starts never beats the enumeration") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Rng rng(seed);
      const DomainMask start = random_mask(g, 4, rng);
      const SwapResult s = cell_swap_local_search(start);
      CHECK(s.mask.cell_count() == 4u);
      CHECK(s.report.final_energy >= bf.energy * (1.0 + 1e-9));
      const auto& hist = s.report.energy_history;
      CHECK(hist.size() == static_cast<std::size_t>(s.report.moves) + 1);
      for (std::size_t i = 1; i < hist.size(); ++i) CHECK(hist[i] < hist[i - 1]);
      CHECK(s.report.final_energy == doctest::Approx(energy(s.mask)).epsilon(1e-9));
    }
  }
}

TEST_CASE("random_mask is deterministic and eligible") {
  const CylinderGrid g(kUnit, 1.0, 6, 1, 8, Mode::Full);
  Rng a(42), b(42), c(43);
  const DomainMask ma = random_mask(g, 7, a);
  CHECK(ma == random_mask(g, 7, b));
  CHECK(ma.cell_count() == 7u);
  for (std::size_t idx : ma.inside_indices()) CHECK(g.eligible(idx));
  CHECK_FALSE(ma == random_mask(g, 7, c));
  Rng d(0);
  CHECK_THROWS_AS(random_mask(g, 37, d), InvalidArgument);
}
