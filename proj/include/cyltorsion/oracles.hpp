#pragma once

// Closed-form energies, thresholds and bounds used as ground truth.

#include "cyltorsion/geometry.hpp"

namespace cylt::oracles {

inline constexpr double kPi = 3.14159265358979323846;

/// Unique root of  sqrt(s) tanh(sqrt(s)) = 1  on [1, 2].
double beta_root();

/// Second eigenvalue (first nonzero) of the cell-centred Neumann Laplacian on
/// ]0, length[ with `cells` cells, found by Sturm-sequence bisection.
double neumann_lambda1_1d(double length, int cells = 1024);

/// lambda1 of the cross-section: the 1-D value for an interval, the minimum
/// over the widths for a box.
double neumann_lambda1(const CrossSection& cross_section, int cells = 1024);

enum class Verdict { NotLocalMin, LocalMin, Marginal };
const char* to_string(Verdict v);

struct StabilityVerdict {
  double lambda1 = 0.0;
  double threshold = 0.0;  // 4 beta / h^2
  Verdict verdict = Verdict::Marginal;
  double margin = 0.0;  // lambda1 - threshold
};

/// Stability of the flat cylinder omega x ]-h/2, h/2[.
StabilityVerdict stability_classify(const CrossSection& cross_section, double h);
StabilityVerdict classify(double lambda1, double h);

/// Height at which lambda1 = 4 beta / h^2.
double marginal_height(const CrossSection& cross_section);

/// -|omega| h^3 / 24
double bounded_cylinder_energy(double omega_measure, double h);
/// -c^2 / (8 pi). When a > 0 is given, throws InfeasibleGeometry if the
/// half-disk radius sqrt(2c/pi) exceeds a.
double half_disk_energy_2d(double c, double a = 0.0);
/// sigma_N, the measure of the unit ball in R^N.
double unit_ball_measure(int N);
/// -c^{1+2/N} / (2 N (N+2) sigma_N^{2/N})
double ball_energy(double c, int N);

/// 3 a^2 / pi
double crossing_volume_2d(double a);

struct GammaBounds {
  double large_c_bound = 0.0;  // 2 sqrt(3) |omega|
  double small_c_bound = 0.0;  // c^{1-1/N} sqrt(N(N+2)) (sigma_N/2)^{1/N}
};
GammaBounds gamma_bounds(double c, double omega_measure, int N);

struct C0Relations {
  double c0_identity = 0.0;  // (c / |Gamma|)^2
  double c0_lower = 0.0;     // 2 |E| / c
  bool consistent = false;   // c0_identity >= c0_lower - tol
};
C0Relations c0_relations(double c, double energy, double gamma_length,
                         double rel_tol = 0.1);

/// |O_half - O_full/2| / |O_full/2|
double halfcylinder_relation(double energy_half, double energy_full);

}  // namespace cylt::oracles
