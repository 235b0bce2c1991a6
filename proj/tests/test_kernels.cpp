#include "doctest.h"

#include <cmath>
#include <vector>

#include "cyltorsion/geometry.hpp"
#include "cyltorsion/kernels.hpp"
#include "cyltorsion/rng.hpp"
#include "cyltorsion/torsion.hpp"

using namespace cylt;
namespace k = cylt::kernels;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

// Restores automatic selection when a test pins a table.
struct KernelGuard {
  ~KernelGuard() { k::select_kernels("auto"); }
};

}  // namespace

TEST_CASE("scalar table is always available and selectable") {
  KernelGuard guard;
  CHECK(k::select_kernels("scalar"));
  CHECK(std::string(k::active().name) == "scalar");
  CHECK_FALSE(k::select_kernels("neon-or-whatever"));
  CHECK(std::string(k::active().name) == "scalar");
}

TEST_CASE("AVX2 vector kernels match the scalar reference") {
  const k::KernelTable* avx = k::avx2_table();
  if (!avx) {
    MESSAGE("AVX2 variant unavailable on this machine; equivalence not exercised");
    return;
  }
  const k::KernelTable& ref = k::scalar_table();
  Rng rng(7);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 8u, 13u, 64u, 67u, 1000u}) {
    CAPTURE(n);
    const auto a = random_vec(rng, n), b = random_vec(rng, n);
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) abs_sum += std::abs(a[i] * b[i]);
    CHECK(std::abs(ref.dot(a.data(), b.data(), n) - avx->dot(a.data(), b.data(), n)) <=
          1e-15 * (abs_sum + 1.0) * 4);

    auto y1 = b, y2 = b;
    ref.axpy(0.37, a.data(), y1.data(), n);
    avx->axpy(0.37, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));

    y1 = b;
    y2 = b;
    ref.xpby(a.data(), -1.3, y1.data(), n);
    avx->xpby(a.data(), -1.3, y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15 * 4);

    std::vector<double> m1(n), m2(n);
    ref.mul(a.data(), b.data(), m1.data(), n);
    avx->mul(a.data(), b.data(), m2.data(), n);
    CHECK(m1 == m2);
  }
}

TEST_CASE("AVX2 stencil and Hamilton-Jacobi kernels match the scalar reference") {
  const k::KernelTable* avx = k::avx2_table();
  if (!avx) return;
  const k::KernelTable& ref = k::scalar_table();
  Rng rng(11);
  const std::ptrdiff_t stride = 37;
  const std::size_t rows = 23, n = static_cast<std::size_t>(stride) * rows;
  const auto x = random_vec(rng, n), diag = random_vec(rng, n, 1.0, 5.0);
  std::vector<std::vector<double>> coef(4);
  for (auto& c : coef) c = random_vec(rng, n, 0.0, 1.0);
  k::Stencil s;
  s.diag = diag.data();
  s.dirs = 4;
  const std::ptrdiff_t off[4] = {-1, 1, -stride, stride};
  for (int d = 0; d < 4; ++d) {
    s.coef[d] = coef[static_cast<std::size_t>(d)].data();
    s.offset[d] = off[d];
  }
  const auto begin = static_cast<std::size_t>(stride) + 1, end = n - static_cast<std::size_t>(stride) - 1;
  std::vector<double> y1(n, 0.0), y2(n, 0.0);
  ref.apply_stencil(s, x.data(), y1.data(), begin, end);
  avx->apply_stencil(s, x.data(), y2.data(), begin, end);
  for (std::size_t p = begin; p < end; ++p) CHECK(std::abs(y1[p] - y2[p]) <= 1e-14);

  const auto phi = random_vec(rng, n), speed = random_vec(rng, n);
  std::vector<double> o1(n, 0.0), o2(n, 0.0);
  k::HamiltonJacobiArgs args{phi.data(), speed.data(), o1.data(), stride, 31.0, 17.0, 1e-3};
  ref.hamilton_jacobi(args, begin, end);
  args.out = o2.data();
  avx->hamilton_jacobi(args, begin, end);
  for (std::size_t p = begin; p < end; ++p) CHECK(std::abs(o1[p] - o2[p]) <= 1e-14);
}

TEST_CASE("torsion solves agree across kernel tables") {
  if (!k::avx2_table()) return;
  KernelGuard guard;
  const CylinderGrid g = build_grid(CrossSection::interval(1.0), 1.0, 32, Mode::Full);
  const DomainMask m = mask_from_shape(g, HalfDisk{Wall::Left, 0.5, 0.0});
  REQUIRE(k::select_kernels("scalar"));
  const TorsionSolution a = solve_torsion(g, m, 1e-12);
  REQUIRE(k::select_kernels("avx2"));
  const TorsionSolution b = solve_torsion(g, m, 1e-12);
  CHECK(a.energy == doctest::Approx(b.energy).epsilon(1e-10));
  for (std::size_t i = 0; i < g.cell_count(); ++i) CHECK(std::abs(a.u[i] - b.u[i]) <= 1e-10);
}
