#pragma once

// Volume-constrained descent of the torsional energy by a level-set flow.
//
// The free boundary moves with normal speed  v = g^2 - mu, where g = |grad u|
// is sampled in a band inside the boundary and mu is the band mean of g^2.
// To first order this leaves the volume unchanged while the energy decreases
// at rate  -1/2 int (g^2 - mu)^2. A stationary shape has |grad u| constant on
// its free boundary.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cyltorsion/geometry.hpp"
#include "cyltorsion/oracles.hpp"
#include "cyltorsion/torsion.hpp"

namespace cylt {

struct OptimizerConfig {
  /// Largest boundary displacement per step, in cells. (0, 0.5].
  double cfl = 0.5;
  int max_iters = 1500;
  /// Allowed |volume - c| / c.
  double volume_tol = 1e-3;
  /// Replace the shape by its Steiner symmetrization every this many steps
  /// (0 disables; full mode only).
  int symmetrize_every = 25;
  int reinit_every = 5;
  /// Converged when the energy moved by less than energy_rtol (relative)
  /// over the last `window` steps.
  int window = 40;
  double energy_rtol = 2e-4;
  double solver_tol = 1e-9;
  std::uint64_t seed = 0;
  Band band{};
  /// Floor on max|v| in the step-size rule, as a fraction of mu. Keeps
  /// displacements proportional to |v| once the speed becomes small.
  double speed_floor = 0.1;
  /// Radius, in grid spacings, over which band samples are averaged into
  /// the speed. Filters the staircase noise in g.
  double smoothing = 4.0;
  /// Amplitude (a length) of an initial  -cos(pi x1 / a)  perturbation of
  /// phi, which swells the shape near x1 = 0. Breaks the left/right
  /// symmetry of wall-to-wall starts.
  double init_tilt = 0.0;

  void validate() const;
};

struct LevelSetState {
  CylinderGrid grid;
  std::vector<double> phi;
  double target_volume = 0.0;
  std::size_t target_cells = 0;
  DomainMask mask;
  int iteration = 0;
  std::optional<ScalarField> warm_start;
};

/// phi = signed distance to the initial mask, shifted so |{phi < 0}| = c.
LevelSetState init_levelset(const DomainMask& initial, double c, const OptimizerConfig& config);
LevelSetState init_levelset(const CylinderGrid& grid, const Shape& shape, double c,
                            const OptimizerConfig& config);

struct StepRecord {
  int iter = 0;
  /// Energy and volume of the mask the step started from.
  double energy = 0.0;
  double volume = 0.0;
  double c0_estimate = 0.0;
  double rel_stddev = 0.0;
  double gamma_length = 0.0;
  double mu = 0.0;
  double dt = 0.0;
  bool reinitialized = false;
  bool symmetrized = false;
};

StepRecord evolve_step(LevelSetState& state, const OptimizerConfig& config);

struct ContactAngle {
  Wall wall = Wall::Left;
  bool upper = true;
  double degrees = 0.0;
};

struct OptimizerReport {
  std::vector<StepRecord> history;
  DomainMask final_mask;
  std::vector<double> final_phi;
  ScalarField final_u;
  double target_volume = 0.0;
  double final_energy = 0.0;
  double final_volume = 0.0;
  /// Marching-squares length of the zero contour of phi.
  double gamma_length = 0.0;
  double gamma_staircase = 0.0;
  double g_mean = 0.0;
  double g_rel_stddev = 0.0;
  double c0_estimate = 0.0;
  oracles::C0Relations c0;
  bool connected = false;
  int components = 0;
  bool wall_contact = false;
  double wall_measure = 0.0;
  double contact_left = 0.0;
  double contact_right = 0.0;
  std::vector<ContactAngle> contact_angles;
  bool converged = false;
  int iterations = 0;
  int monotonicity_violations = 0;
  int monotonicity_checked = 0;
};

/// Iterates evolve_step until the energy settles or max_iters is reached.
/// Deterministic for a given state and config.
OptimizerReport run(LevelSetState state, const OptimizerConfig& config);

/// Diagnostics of a finished shape (used by run() and for direct audits).
void fill_diagnostics(OptimizerReport& report, const OptimizerConfig& config);

/// Angle between the zero contour and the wall direction e2 where the shape
/// meets a lateral wall, from a line fit through the crossings of the three
/// columns nearest the wall. 90 degrees is orthogonal contact.
std::vector<ContactAngle> contact_angles(const DomainMask& mask, std::span<const double> phi);

}  // namespace cylt
