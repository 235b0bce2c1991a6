#pragma once

// Command-line front end: run configuration, shape presets and dispatch.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cyltorsion/geometry.hpp"
#include "cyltorsion/optimizer.hpp"

namespace cylt::app {

struct CRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  /// lo, lo + step, ... up to hi (inclusive within step/1000).
  std::vector<double> values() const;
};

/// "LO:HI:STEP"; throws InvalidArgument.
CRange parse_c_range(const std::string& text);

struct RunConfig {
  std::string command = "solve";
  double a = 1.0;
  /// Two widths select a 3-D box cross-section (solve and symmetrize only).
  std::vector<double> widths;
  double L = 1.0;
  double res = 64.0;
  Mode mode = Mode::Full;
  double c = 0.5;
  std::optional<CRange> c_range;
  /// rect | halfdisk | disk | blob | auto
  std::string shape = "auto";
  OptimizerConfig opt{};
  std::optional<double> tilt;
  /// solve: flat cylinder of this height instead of the preset.
  std::optional<double> h;
  std::string out = "out";
  std::uint64_t seed = 0;
  bool vtk = false;
  /// enumerate: explicit grid, cell count and number of swap starts.
  int n1 = 6;
  int nz = 8;
  int k = 4;
  int starts = 20;

  CrossSection cross_section() const;
  void validate() const;
};

/// Builds a RunConfig from argv: --config JSON first, then flags on top.
/// Returns nullopt when help was printed.
std::optional<RunConfig> parse_args(int argc, char** argv);

/// Flat JSON object with the flag names as keys.
void apply_json(RunConfig& config, const std::string& text);

/// Shape of volume c (half the preset in half mode is inside z >= 0).
///   rect: omega x ]-h/2, h/2[ with |omega| h = c
///   halfdisk: half-disk (half-ball) on the left wall
///   disk: disk (ball) centred in the cross-section
///   blob: half-ellipse from the left wall reaching past the right wall
///   auto: halfdisk up to the crossing volume 3a^2/pi, blob beyond it
Shape preset_shape(const CylinderGrid& grid, const std::string& name, double c);

/// Default initial tilt for a preset: 0.03 a for rect, else 0.
double default_tilt(const std::string& shape, double a);

/// Runs the optimizer on the configured preset and volume.
OptimizerReport optimize(const RunConfig& config, double c);

/// Executes config.command, writing outputs under config.out. Returns the
/// process exit code; library errors map to their exit_code().
int dispatch(const RunConfig& config);

}  // namespace cylt::app
