#include <fmt/format.h>

#include <ostream>

#include "cyltorsion/torsion.hpp"

namespace cylt {

void write_field_csv(std::ostream& out, const ScalarField& field) {
  const CylinderGrid& g = field.grid();
  const bool three_d = g.dimension() == 3;
  out << (three_d ? "x1,x2,xN,value\n" : "x1,xN,value\n");
  for (std::size_t idx = 0; idx < g.cell_count(); ++idx) {
    const Point p = g.center(idx);
    if (three_d)
      out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", p.x1, p.x2, p.z, field[idx]);
    else
      out << fmt::format("{:.17g},{:.17g},{:.17g}\n", p.x1, p.z, field[idx]);
  }
}

void write_field_vtk(std::ostream& out, const ScalarField& field, std::string_view name) {
  const CylinderGrid& g = field.grid();
  const bool three_d = g.dimension() == 3;
  out << "# vtk DataFile Version 3.0\n";
  out << "torsion field\nASCII\nDATASET STRUCTURED_POINTS\n";
  // Points are cell corners; values are attached to cells.
  out << fmt::format("DIMENSIONS {} {} {}\n", g.n1() + 1, three_d ? g.n2() + 1 : g.nz() + 1,
                     three_d ? g.nz() + 1 : 1);
  if (three_d)
    out << fmt::format("ORIGIN 0 0 {:.17g}\n", g.z_min());
  else
    out << fmt::format("ORIGIN 0 {:.17g} 0\n", g.z_min());
  out << fmt::format("SPACING {:.17g} {:.17g} {:.17g}\n", g.h1(), three_d ? g.h2() : g.hz(),
                     three_d ? g.hz() : 1.0);
  out << fmt::format("CELL_DATA {}\nSCALARS {} double 1\nLOOKUP_TABLE default\n",
                     g.cell_count(), name);
  for (std::size_t idx = 0; idx < g.cell_count(); ++idx)
    out << fmt::format("{:.17g}\n", field[idx]);
}

}  // namespace cylt
