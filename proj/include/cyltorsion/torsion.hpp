#pragma once

// Discrete torsion problem  -Lap u = 1  in the mask, u = 0 on the free
// boundary, zero flux through the container wall (and through the base plane
// in half mode), on a cell-centred finite-volume grid.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "cyltorsion/geometry.hpp"

namespace cylt {

class ScalarField {
 public:
  explicit ScalarField(CylinderGrid grid)
      : grid_(std::move(grid)), values_(grid_.cell_count(), 0.0) {}
  ScalarField(CylinderGrid grid, std::vector<double> values);

  const CylinderGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t idx) const { return values_[idx]; }
  double& operator[](std::size_t idx) { return values_[idx]; }
  double max() const;

 private:
  CylinderGrid grid_;
  std::vector<double> values_;
};

/// u / d for an inside cell at distance d from the free boundary.
struct GradientSample {
  std::size_t cell;
  double distance;
  double g;
};

/// Sampling band in multiples of the grid spacing h_g.
struct Band {
  double lo = 1.0;
  double hi = 3.0;
};

struct SolveOptions {
  double tol = 1e-10;
  /// 0 selects 50 sqrt(unknowns), clamped to [100, kMaxIterations].
  int max_iterations = 0;
  /// Warm start; must live on the same grid. Values outside the mask are
  /// ignored.
  const ScalarField* initial = nullptr;
  Band band{};
  /// Fill TorsionSolution::boundary_gradient.
  bool sample_gradient = true;
};

inline constexpr int kMaxIterations = 200000;

struct TorsionSolution {
  ScalarField u;
  /// Mass form  -1/2 sum u |cell|.
  double energy = 0.0;
  double energy_mass = 0.0;
  /// Dirichlet form  -1/2 u.A u |cell|.
  double energy_dirichlet = 0.0;
  /// Allowed |energy_dirichlet - energy_mass|: ten times the bound implied by
  /// the final residual.
  double energy_consistency_bound = 0.0;
  int iterations = 0;
  /// Relative residual |b - A u| / |b| of the returned iterate.
  double residual = 0.0;
  std::vector<GradientSample> boundary_gradient;
};

TorsionSolution solve_torsion(const CylinderGrid& grid, const DomainMask& mask,
                              double tol = 1e-10);
TorsionSolution solve_torsion(const DomainMask& mask, const SolveOptions& options);

double energy_of(const TorsionSolution& solution);

/// Both energy forms of an arbitrary field restricted to a mask, using the
/// solver's discrete operator for the Dirichlet form.
struct EnergyForms {
  double mass = 0.0;
  double dirichlet = 0.0;
};
EnergyForms energy_forms(const ScalarField& u, const DomainMask& mask);

/// Per-column symmetric decreasing rearrangement about z = 0 with the same
/// placement order as steiner_symmetrize(DomainMask): rank 0 at signed index
/// 0, then -1, +1, -2, ... Requires u >= 0 and full mode.
ScalarField steiner_symmetrize(const ScalarField& u);

/// Sum over columns of the axial Dirichlet sum  sum_k (u_{k+1} - u_k)^2,
/// with the field extended by zero beyond the column ends.
double axial_dirichlet_sum(const ScalarField& u, int i, int j);

struct GradientStats {
  std::vector<GradientSample> samples;
  double mean = 0.0;
  double stddev = 0.0;
  double rel_stddev = 0.0;
  /// mean(g)^2
  double c0_estimate = 0.0;
};

/// Samples g = u/d on inside cells whose distance d to the free boundary lies
/// in the band. The mask form measures d to the staircase facets; the
/// level-set form uses d = -phi (phi a signed distance, negative inside).
GradientStats boundary_gradient_stats(const ScalarField& u, const DomainMask& mask,
                                      Band band = {});
GradientStats boundary_gradient_stats(const ScalarField& u, const DomainMask& mask,
                                      std::span<const double> levelset, Band band = {});
/// All statistics stay 0 for an empty sample set.
GradientStats summarize(std::vector<GradientSample> samples);

/// Closed-form torsion function of the bounded cylinder of height h at cell
/// centres,  (h^2/4 - z^2)/2  inside, 0 outside.
ScalarField analytic_rect_field(const CylinderGrid& grid, double h);

// --- output --------------------------------------------------------------------

/// Columns x1, xN, value (x1, x2, xN, value for N = 3), 17 significant digits.
void write_field_csv(std::ostream& out, const ScalarField& field);
/// Legacy ASCII VTK structured points with the field as cell data.
void write_field_vtk(std::ostream& out, const ScalarField& field, std::string_view name);

}  // namespace cylt
