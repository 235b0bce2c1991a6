#pragma once

// Container, grid, cell masks and set-level transforms.
//
// The container is  omega x R  truncated to  omega x [-L, L]  (full mode) or
// omega x [0, L]  (half mode). omega is an interval ]0, a[ (N = 2) or an
// axis-aligned box ]0, w1[ x ]0, w2[ (N = 3). Axis 2 of every Point is the
// cylinder axis x_N, called z throughout.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cylt {

enum class Mode { Full, Half };

const char* to_string(Mode mode);
Mode parse_mode(const std::string& text);

class CrossSection {
 public:
  static CrossSection interval(double a);
  static CrossSection box(double w1, double w2);

  /// Space dimension N of the container.
  int dimension() const { return transverse_axes_ + 1; }
  int transverse_axes() const { return transverse_axes_; }
  bool is_interval() const { return transverse_axes_ == 1; }
  double width(int axis) const { return widths_[static_cast<std::size_t>(axis)]; }
  /// H^{N-1}(omega).
  double measure() const;
  /// First nonzero Neumann eigenvalue of -Laplace on omega, from a
  /// finite-difference eigensolve (see oracles.hpp).
  double lambda1() const;

  bool operator==(const CrossSection&) const = default;

 private:
  CrossSection(int axes, std::array<double, 2> widths)
      : transverse_axes_(axes), widths_(widths) {}
  int transverse_axes_;
  std::array<double, 2> widths_;
};

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
  double z = 0.0;
};

struct CellCoord {
  int i = 0;  // x1
  int j = 0;  // x2 (always 0 for N = 2)
  int k = 0;  // z
};

class CylinderGrid {
 public:
  /// Explicit cell counts. n2 must be 1 for an interval cross-section. Use
  /// build_grid() for resolution-based construction; this form also serves
  /// tiny enumeration instances.
  CylinderGrid(CrossSection cross_section, double L, int n1, int n2, int nz,
               Mode mode);

  const CrossSection& cross_section() const { return cs_; }
  double half_length() const { return L_; }
  Mode mode() const { return mode_; }
  bool half() const { return mode_ == Mode::Half; }
  int dimension() const { return cs_.dimension(); }

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int nz() const { return nz_; }
  double h1() const { return h1_; }
  double h2() const { return h2_; }
  double hz() const { return hz_; }
  double spacing(int axis) const { return axis == 0 ? h1_ : axis == 1 ? h2_ : hz_; }
  /// Reference spacing h_g used for band widths and tolerances.
  double h() const;

  std::size_t cell_count() const { return cells_; }
  double cell_volume() const;
  double total_volume() const { return cell_volume() * static_cast<double>(cells_); }
  /// Area of a facet normal to `axis`.
  double facet_area(int axis) const;

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * static_cast<std::size_t>(n2_) +
            static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(n1_) +
           static_cast<std::size_t>(i);
  }
  CellCoord coord(std::size_t idx) const;
  Point center(std::size_t idx) const;
  double z_min() const { return half() ? 0.0 : -L_; }
  double z_center(int k) const { return z_min() + (k + 0.5) * hz_; }
  /// Axial index of the first cell above the plane z = 0.
  int axial_origin() const { return half() ? 0 : nz_ / 2; }
  /// Cells in the last layer below a cap; masks may not use them.
  bool in_cap_layer(int k) const { return k == nz_ - 1 || (!half() && k == 0); }
  bool eligible(std::size_t idx) const { return !in_cap_layer(coord(idx).k); }

  // Padded layout: one ghost layer around the grid in every axis.
  std::size_t padded_size() const;
  std::size_t padded_index(int i, int j, int k) const;
  std::ptrdiff_t padded_stride(int axis) const;
  std::size_t padded_index(std::size_t idx) const {
    const CellCoord c = coord(idx);
    return padded_index(c.i, c.j, c.k);
  }

  bool operator==(const CylinderGrid&) const = default;

 private:
  CrossSection cs_;
  double L_;
  int n1_, n2_, nz_;
  Mode mode_;
  double h1_, h2_, hz_;
  std::size_t cells_;
};

/// Grid with round(width * resolution) transverse cells per axis and
/// ceil(length * resolution) axial cells (rounded up to even in full mode).
CylinderGrid build_grid(const CrossSection& cross_section, double L,
                        double resolution, Mode mode);

class DomainMask {
 public:
  explicit DomainMask(CylinderGrid grid);
  /// Throws InfeasibleGeometry if a cap-layer cell is set.
  DomainMask(CylinderGrid grid, std::vector<std::uint8_t> inside);

  const CylinderGrid& grid() const { return grid_; }
  bool contains(std::size_t idx) const { return inside_[idx] != 0; }
  std::size_t cell_count() const { return count_; }
  bool empty() const { return count_ == 0; }
  double volume() const { return static_cast<double>(count_) * grid_.cell_volume(); }
  std::span<const std::uint8_t> cells() const { return inside_; }
  std::vector<std::size_t> inside_indices() const;

  /// Throws InfeasibleGeometry when setting a cap-layer cell.
  void set(std::size_t idx, bool value);

  bool operator==(const DomainMask&) const = default;

 private:
  CylinderGrid grid_;
  std::vector<std::uint8_t> inside_;
  std::size_t count_ = 0;
};

// --- shapes -----------------------------------------------------------------

enum class Wall { Left, Right };  // x1 = 0, x1 = w1

/// omega x ]-h/2, h/2[ ; in half mode its upper half omega x [0, h/2[.
struct BoundedCylinder {
  double h;
};
/// Half-disk (half-ball for N = 3) centred on a lateral wall at height z0.
struct HalfDisk {
  Wall wall = Wall::Left;
  double r = 0.0;
  double z0 = 0.0;
};
/// Disk (ball) that must lie inside the cross-section.
struct Disk {
  Point center;
  double r = 0.0;
};
struct CustomShape {
  std::function<bool(const Point&)> inside;
};
using Shape = std::variant<BoundedCylinder, HalfDisk, Disk, CustomShape>;

/// Cells whose centres satisfy the shape. Throws InfeasibleGeometry if the
/// shape leaves the cross-section or reaches the cap layer.
DomainMask mask_from_shape(const CylinderGrid& grid, const Shape& shape);

double volume(const DomainMask& mask);

/// Union of two masks on the same grid.
DomainMask unite(const DomainMask& a, const DomainMask& b);
bool disjoint(const DomainMask& a, const DomainMask& b);

/// Per-column Steiner symmetrization about z = 0. A column with m cells
/// occupies signed axial indices -floor(m/2) .. ceil(m/2)-1 relative to
/// axial_origin(). Full mode only.
DomainMask steiner_symmetrize(const DomainMask& mask);

/// Axial stretch x_N -> t x_N by cell replication (integer t >= 1).
DomainMask scale_axial(const DomainMask& mask, int t);

// --- boundary ----------------------------------------------------------------

struct Facet {
  std::size_t cell;  // the inside cell
  int axis;          // 0 = x1, 1 = x2, 2 = z
  int side;          // -1 or +1
};

/// Free boundary Gamma (inside/outside faces interior to the container) and
/// wall part Gamma_1 (faces on the container boundary: the lateral walls, and
/// in half mode the base plane z = 0).
struct BoundarySegments {
  std::vector<Facet> free;
  std::vector<Facet> wall;
  double free_measure = 0.0;
  double wall_measure = 0.0;
  /// Contact measure per transverse axis and side: [axis][0] is the wall at
  /// 0, [axis][1] the wall at w_axis.
  std::array<std::array<double, 2>, 2> lateral_contact{};
  double base_contact = 0.0;

  double lateral_measure() const {
    return lateral_contact[0][0] + lateral_contact[0][1] + lateral_contact[1][0] +
           lateral_contact[1][1];
  }
};

BoundarySegments boundary_decompose(const DomainMask& mask);

/// Euclidean distance from each inside cell centre to the nearest free facet,
/// computed for cells within max_distance; other cells get +infinity.
std::vector<double> distance_to_free_boundary(const DomainMask& mask,
                                              double max_distance);

/// Length of the iso-contour of a cell-centred field (marching squares,
/// clipped at the container walls with mirrored ghost values). 2-D only.
double contour_length(const CylinderGrid& grid, std::span<const double> values,
                      double iso);

struct Connectivity {
  bool connected = false;
  int components = 0;
};

/// Face-adjacency components of the inside cells.
Connectivity connectedness_check(const DomainMask& mask);

// --- text format -------------------------------------------------------------

/// `grid <nx> <nz> <h_g> <a> <L> <mode>` followed by one line of 0/1 per
/// transverse index (axial index increasing left to right). 2-D only.
void write_mask(std::ostream& out, const DomainMask& mask);
DomainMask read_mask(std::istream& in);

}  // namespace cylt
