#include <fmt/format.h>

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cyltorsion/error.hpp"
#include "cyltorsion/geometry.hpp"

namespace cylt {

void write_mask(std::ostream& out, const DomainMask& mask) {
  const CylinderGrid& g = mask.grid();
  if (g.dimension() != 2) throw InvalidArgument("mask text format supports N = 2 only");
  out << fmt::format("grid {} {} {:.17g} {:.17g} {:.17g} {}\n", g.n1(), g.nz(), g.h1(),
                     g.cross_section().width(0), g.half_length(), to_string(g.mode()));
  std::string row(static_cast<std::size_t>(g.nz()), '0');
  for (int i = 0; i < g.n1(); ++i) {
    for (int k = 0; k < g.nz(); ++k)
      row[static_cast<std::size_t>(k)] = mask.contains(g.index(i, 0, k)) ? '1' : '0';
    out << row << '\n';
  }
}

DomainMask read_mask(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("mask file is empty");
  std::istringstream header(line);
  std::string tag, mode_text;
  int nx = 0, nz = 0;
  double h = 0.0, a = 0.0, L = 0.0;
  if (!(header >> tag >> nx >> nz >> h >> a >> L >> mode_text) || tag != "grid")
    throw InvalidArgument(fmt::format("bad mask header '{}'", line));
  const CylinderGrid g(CrossSection::interval(a), L, nx, 1, nz, parse_mode(mode_text));
  if (std::abs(g.h1() - h) > 1e-12 * a)
    throw InvalidArgument(fmt::format("header spacing {} disagrees with a/nx = {}", h, g.h1()));
  std::vector<std::uint8_t> inside(g.cell_count(), 0);
  for (int i = 0; i < nx; ++i) {
    if (!std::getline(in, line) || static_cast<int>(line.size()) < nz)
      throw InvalidArgument(fmt::format("mask row {} is missing or short", i));
    for (int k = 0; k < nz; ++k) {
      const char ch = line[static_cast<std::size_t>(k)];
      if (ch != '0' && ch != '1')
        throw InvalidArgument(fmt::format("mask row {} has invalid character '{}'", i, ch));
      inside[g.index(i, 0, k)] = ch == '1';
    }
  }
  return DomainMask(g, std::move(inside));
}

}  // namespace cylt
