#pragma once

// Level-set utilities for the 2-D optimizer. phi < 0 inside the shape.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "cyltorsion/geometry.hpp"

namespace cylt::levelset {

/// Signed distance to the staircase boundary of a mask: cells next to a free
/// facet get -+h/2, the rest comes from a fast-sweeping solve of |grad d| = 1.
std::vector<double> signed_distance(const DomainMask& mask);

/// Rebuilds phi as a signed distance while keeping its zero contour: cells
/// adjacent to a sign change are initialised from interpolated crossings,
/// then the remainder is swept.
std::vector<double> redistance(const CylinderGrid& grid, std::span<const double> phi);

/// Cells with phi < 0. Throws InfeasibleGeometry if that reaches the cap layer.
DomainMask mask_of(const CylinderGrid& grid, std::span<const double> phi);

/// Shifts phi by a constant so exactly `cells` cells are negative. Returns
/// the shift subtracted. Throws InfeasibleGeometry if the cap layer would be
/// needed.
double shift_to_count(const CylinderGrid& grid, std::vector<double>& phi, std::size_t cells);

/// One explicit upwind step of  phi_t + speed |grad phi| = 0  with mirrored
/// ghosts at every container face.
void advect(const CylinderGrid& grid, std::vector<double>& phi, std::span<const double> speed,
            double dt);

/// Unit outward normal grad(phi)/|grad(phi)| at a cell by central differences
/// (one-sided at the container faces).
std::array<double, 2> normal(const CylinderGrid& grid, std::span<const double> phi,
                             std::size_t idx);

}  // namespace cylt::levelset
