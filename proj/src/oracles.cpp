#include "cyltorsion/oracles.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cyltorsion/error.hpp"

namespace cylt {

double CrossSection::lambda1() const { return oracles::neumann_lambda1(*this); }

namespace oracles {

namespace {

double beta_residual(double s) {
  const double r = std::sqrt(s);
  return r * std::tanh(r) - 1.0;
}

/// Number of eigenvalues below x of the tridiagonal matrix (diag d,
/// off-diagonal e), from the signs of the LDL^T pivots.
int sturm_count(const std::vector<double>& d, double e, double x) {
  int count = 0;
  double q = d[0] - x;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (q == 0.0) q = 1e-300;
    q = d[i] - x - e * e / q;
    if (q < 0) ++count;
  }
  return count;
}

}  // namespace

double beta_root() {
  double lo = 1.0, hi = 2.0;
  // f is strictly increasing on [1, 2]; bisection to round-off, then one
  // Newton polish.
  for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (beta_residual(mid) < 0.0 ? lo : hi) = mid;
  }
  double s = 0.5 * (lo + hi);
  const double r = std::sqrt(s);
  const double t = std::tanh(r);
  const double deriv = (t + r * (1.0 - t * t)) / (2.0 * r);
  const double polished = s - beta_residual(s) / deriv;
  if (std::abs(beta_residual(polished)) <= std::abs(beta_residual(s))) s = polished;
  return s;
}

double neumann_lambda1_1d(double length, int cells) {
  if (!(length > 0.0)) throw InvalidArgument("eigensolve needs a positive length");
  if (cells < 2) throw InvalidArgument("eigensolve needs at least 2 cells");
  const double h = length / cells;
  const double w = 1.0 / (h * h);
  std::vector<double> d(static_cast<std::size_t>(cells), 2.0 * w);
  d.front() = w;
  d.back() = w;
  const double e = -w;
  // Eigenvalues lie in [0, 4w]; lambda_0 = 0, we want the second.
  double lo = 0.0, hi = 4.0 * w;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sturm_count(d, e, mid) >= 2 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double neumann_lambda1(const CrossSection& cs, int cells) {
  if (cs.is_interval()) return neumann_lambda1_1d(cs.width(0), cells);
  if (cs.transverse_axes() == 2)
    return std::min(neumann_lambda1_1d(cs.width(0), cells),
                    neumann_lambda1_1d(cs.width(1), cells));
  throw InvalidArgument("unsupported cross-section");
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::NotLocalMin: return "not_local_min";
    case Verdict::LocalMin: return "local_min";
    default: return "marginal";
  }
}

StabilityVerdict classify(double lambda1, double h) {
  if (!(h > 0.0)) throw InvalidArgument(fmt::format("height must be > 0, got {}", h));
  StabilityVerdict v;
  v.lambda1 = lambda1;
  v.threshold = 4.0 * beta_root() / (h * h);
  v.margin = lambda1 - v.threshold;
  const double tol = 1e-9 * v.threshold;
  v.verdict = v.margin < -tol ? Verdict::NotLocalMin
              : v.margin > tol ? Verdict::LocalMin
                               : Verdict::Marginal;
  return v;
}

StabilityVerdict stability_classify(const CrossSection& cs, double h) {
  return classify(neumann_lambda1(cs), h);
}

double marginal_height(const CrossSection& cs) {
  return 2.0 * std::sqrt(beta_root() / neumann_lambda1(cs));
}

double bounded_cylinder_energy(double omega_measure, double h) {
  return -omega_measure * h * h * h / 24.0;
}

double half_disk_energy_2d(double c, double a) {
  if (!(c > 0.0)) throw InvalidArgument("volume must be > 0");
  if (a > 0.0 && std::sqrt(2.0 * c / kPi) > a)
    throw InfeasibleGeometry(fmt::format("half-disk of area {} has radius {} > a = {}", c,
                                         std::sqrt(2.0 * c / kPi), a));
  return -c * c / (8.0 * kPi);
}

double unit_ball_measure(int N) {
  if (N < 1) throw InvalidArgument("dimension must be >= 1");
  return std::pow(kPi, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
}

double ball_energy(double c, int N) {
  const double sigma = unit_ball_measure(N);
  return -std::pow(c, 1.0 + 2.0 / N) / (2.0 * N * (N + 2) * std::pow(sigma, 2.0 / N));
}

double crossing_volume_2d(double a) {
  if (!(a > 0.0)) throw InvalidArgument("a must be > 0");
  return 3.0 * a * a / kPi;
}

GammaBounds gamma_bounds(double c, double omega_measure, int N) {
  if (!(c > 0.0)) throw InvalidArgument("volume must be > 0");
  GammaBounds b;
  b.large_c_bound = 2.0 * std::sqrt(3.0) * omega_measure;
  b.small_c_bound = std::pow(c, 1.0 - 1.0 / N) * std::sqrt(static_cast<double>(N * (N + 2))) *
                    std::pow(0.5 * unit_ball_measure(N), 1.0 / N);
  return b;
}

C0Relations c0_relations(double c, double energy, double gamma_length, double rel_tol) {
  if (!(gamma_length > 0.0)) throw InvalidArgument("free-boundary length must be > 0");
  if (!(c > 0.0)) throw InvalidArgument("volume must be > 0");
  C0Relations r;
  r.c0_identity = (c / gamma_length) * (c / gamma_length);
  r.c0_lower = 2.0 * std::abs(energy) / c;
  r.consistent = r.c0_identity >= r.c0_lower * (1.0 - rel_tol);
  return r;
}

double halfcylinder_relation(double energy_half, double energy_full) {
  const double half_full = 0.5 * energy_full;
  if (half_full == 0.0) throw InvalidArgument("full-cylinder energy is zero");
  return std::abs(energy_half - half_full) / std::abs(half_full);
}

}  // namespace oracles
}  // namespace cylt
