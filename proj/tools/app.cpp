#include "app.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "cyltorsion/discrete_search.hpp"
#include "cyltorsion/error.hpp"
#include "cyltorsion/levelset.hpp"
#include "cyltorsion/oracles.hpp"
#include "cyltorsion/report_io.hpp"
#include "cyltorsion/rng.hpp"
#include "cyltorsion/torsion.hpp"
#include "json.hpp"

namespace cylt::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kCommands = {"solve", "symmetrize", "optimize",
                                            "sweep", "verify",     "enumerate"};
const std::vector<std::string> kShapes = {"rect", "halfdisk", "disk", "blob", "auto", "random"};

bool parse_on_off(const std::string& s) {
  if (s == "on") return true;
  if (s == "off") return false;
  throw InvalidArgument(fmt::format("expected on|off, got '{}'", s));
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw Error(fmt::format("cannot write {}", path.string()));
  f.precision(17);
  return f;
}

void write_json(const fs::path& path, const json& j) { open_out(path) << j.dump(2) << "\n"; }

CylinderGrid make_grid(const RunConfig& cfg) {
  return build_grid(cfg.cross_section(), cfg.L, cfg.res, cfg.mode);
}

json config_json(const RunConfig& cfg) {
  json j;
  j["cmd"] = cfg.command;
  j["a"] = cfg.a;
  if (!cfg.widths.empty()) j["widths"] = cfg.widths;
  j["L"] = cfg.L;
  j["res"] = cfg.res;
  j["mode"] = to_string(cfg.mode);
  j["c"] = cfg.c;
  if (cfg.c_range)
    j["c-range"] = fmt::format("{}:{}:{}", cfg.c_range->lo, cfg.c_range->hi, cfg.c_range->step);
  j["shape"] = cfg.shape;
  j["seed"] = cfg.seed;
  j["max-iters"] = cfg.opt.max_iters;
  j["sym-every"] = cfg.opt.symmetrize_every;
  return j;
}

void write_outputs(const fs::path& dir, const DomainMask& mask, const ScalarField& u, bool vtk) {
  {
    auto f = open_out(dir / "mask.txt");
    write_mask(f, mask);
  }
  {
    auto f = open_out(dir / "field.csv");
    write_field_csv(f, u);
  }
  if (vtk) {
    auto f = open_out(dir / "field.vtk");
    write_field_vtk(f, u, "u");
  }
}

/// Checks collected by `verify` and `symmetrize`.
struct Checks {
  json list = json::array();
  bool ok = true;
  void add(const std::string& name, bool pass, double value, double expected, double tol) {
    list.push_back({{"name", name}, {"pass", pass}, {"value", value}, {"expected", expected},
                    {"tolerance", tol}});
    ok = ok && pass;
    std::cout << fmt::format("{:<36} {}  value={:.12g} expected={:.12g}\n", name,
                             pass ? "ok" : "FAILED", value, expected);
  }
};

int cmd_solve(const RunConfig& cfg, const fs::path& out) {
  const CylinderGrid g = make_grid(cfg);
  const Shape shape = cfg.h ? Shape(BoundedCylinder{*cfg.h}) : preset_shape(g, cfg.shape, cfg.c);
  const DomainMask mask = mask_from_shape(g, shape);
  if (mask.empty()) throw InfeasibleGeometry("the shape covers no cell at this resolution");
  const TorsionSolution sol = solve_torsion(g, mask);
  json j = solve_summary(mask, sol);
  j["config"] = config_json(cfg);
  j["max_u"] = sol.u.max();
  write_json(out / "summary.json", j);
  write_outputs(out, mask, sol.u, cfg.vtk);
  std::cout << fmt::format("E = {:.10g}  volume = {:.10g}  iterations = {}\n", sol.energy,
                           mask.volume(), sol.iterations);
  return 0;
}

int cmd_symmetrize(const RunConfig& cfg, const fs::path& out) {
  if (cfg.mode != Mode::Full) throw InvalidArgument("symmetrize needs --mode full");
  const CylinderGrid g = make_grid(cfg);
  DomainMask mask(g);
  if (cfg.shape == "random" || cfg.shape == "auto") {
    Rng rng(cfg.seed);
    const auto cells = static_cast<std::size_t>(std::llround(cfg.c / g.cell_volume()));
    mask = random_mask(g, std::max<std::size_t>(cells, 1), rng);
  } else {
    mask = mask_from_shape(g, preset_shape(g, cfg.shape, cfg.c));
  }
  const DomainMask sym = steiner_symmetrize(mask);
  const TorsionSolution before = solve_torsion(g, mask);
  const TorsionSolution after = solve_torsion(g, sym);
  const ScalarField usym = steiner_symmetrize(before.u);

  Checks checks;
  checks.add("measure preserved", sym.cell_count() == mask.cell_count(), sym.volume(),
             mask.volume(), 0.0);
  checks.add("energy not increased (2% slack)",
             after.energy <= before.energy + 0.02 * std::abs(before.energy), after.energy,
             before.energy, 0.02);
  double worst_l2 = 0.0;
  bool dirichlet_ok = true;
  const auto uv = before.u.values();
  const auto sv = usym.values();
  for (int j = 0; j < g.n2(); ++j) {
    for (int i = 0; i < g.n1(); ++i) {
      double a2 = 0.0, b2 = 0.0;
      for (int k = 0; k < g.nz(); ++k) {
        a2 += uv[g.index(i, j, k)] * uv[g.index(i, j, k)];
        b2 += sv[g.index(i, j, k)] * sv[g.index(i, j, k)];
      }
      worst_l2 = std::max(worst_l2, std::abs(a2 - b2) / std::max(a2, 1e-300));
      if (axial_dirichlet_sum(usym, i, j) > axial_dirichlet_sum(before.u, i, j) * (1 + 1e-12) + 1e-300)
        dirichlet_ok = false;
    }
  }
  checks.add("column L2 preserved", worst_l2 <= 1e-12, worst_l2, 0.0, 1e-12);
  checks.add("axial Dirichlet sums not increased", dirichlet_ok, dirichlet_ok ? 1.0 : 0.0, 1.0, 0.0);

  json j;
  j["config"] = config_json(cfg);
  j["volume"] = mask.volume();
  j["energy_before"] = before.energy;
  j["energy_after"] = after.energy;
  j["checks"] = checks.list;
  j["pass"] = checks.ok;
  write_json(out / "summary.json", j);
  write_outputs(out, sym, usym, cfg.vtk);
  return checks.ok ? 0 : VerificationFailure("symmetrization invariant failed").exit_code();
}

int cmd_optimize(const RunConfig& cfg, const fs::path& out) {
  const OptimizerReport r = optimize(cfg, cfg.c);
  json j = to_json(r);
  j["config"] = config_json(cfg);
  write_json(out / "summary.json", j);
  {
    auto f = open_out(out / "history.csv");
    write_history_csv(f, r.history);
  }
  write_outputs(out, r.final_mask, r.final_u, cfg.vtk);
  std::cout << fmt::format("E = {:.10g}  volume = {:.10g}  iterations = {}  converged = {}\n",
                           r.final_energy, r.final_volume, r.iterations, r.converged);
  return 0;
}

int cmd_sweep(const RunConfig& cfg, const fs::path& out) {
  if (!cfg.c_range) throw InvalidArgument("sweep needs --c-range LO:HI:STEP");
  const std::vector<double> cs = cfg.c_range->values();
  const CrossSection section = cfg.cross_section();
  const double omega = section.measure();
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());

  std::vector<std::optional<OptimizerReport>> reports(cs.size());
  for (std::size_t start = 0; start < cs.size(); start += workers) {
    std::vector<std::future<OptimizerReport>> jobs;
    const std::size_t end = std::min(cs.size(), start + workers);
    for (std::size_t i = start; i < end; ++i)
      jobs.push_back(std::async(std::launch::async, [&cfg, c = cs[i]] { return optimize(cfg, c); }));
    for (std::size_t i = start; i < end; ++i) reports[i] = jobs[i - start].get();
  }

  auto f = open_out(out / "sweep.csv");
  f << "c,O_c_estimate,rect_oracle,half_disk_oracle,verdict,gamma_length,gamma_bound,"
       "c0_identity,c0_lower,c0_consistent\n";
  json rows = json::array();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const double c = cs[i];
    const OptimizerReport& r = *reports[i];
    const double h = c / omega;
    const double rect = oracles::bounded_cylinder_energy(omega, h);
    std::optional<double> half;
    try {
      half = oracles::half_disk_energy_2d(c, section.width(0));
    } catch (const InfeasibleGeometry&) {
    }
    const auto verdict = oracles::stability_classify(section, h);
    const double bound = oracles::gamma_bounds(c, omega, 2).large_c_bound;
    f << fmt::format("{:.17g},{:.17g},{:.17g},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", c,
                     r.final_energy, rect, half ? fmt::format("{:.17g}", *half) : "nan",
                     oracles::to_string(verdict.verdict), r.gamma_length, bound,
                     r.c0.c0_identity, r.c0.c0_lower, r.c0.consistent ? 1 : 0);
    rows.push_back({{"c", c},
                    {"O_c_estimate", r.final_energy},
                    {"rect_oracle", rect},
                    {"half_disk_oracle", half ? json(*half) : json(nullptr)},
                    {"verdict", oracles::to_string(verdict.verdict)},
                    {"gamma_length", r.gamma_length},
                    {"gamma_bound", bound},
                    {"c0_identity", r.c0.c0_identity},
                    {"c0_lower", r.c0.c0_lower},
                    {"c0_consistent", r.c0.consistent},
                    {"converged", r.converged},
                    {"wall_contact", r.wall_contact},
                    {"connected", r.connected}});
    std::cout << fmt::format("c = {:<8g} O_c ~ {:.8g}  verdict = {}\n", c, r.final_energy,
                             oracles::to_string(verdict.verdict));
  }
  json j;
  j["config"] = config_json(cfg);
  j["rows"] = rows;
  write_json(out / "summary.json", j);
  return 0;
}

int cmd_verify(const RunConfig& cfg, const fs::path& out) {
  Checks checks;
  const double beta = oracles::beta_root();
  const double sb = std::sqrt(beta);
  checks.add("beta root residual", std::abs(sb * std::tanh(sb) - 1.0) < 1e-12,
             sb * std::tanh(sb) - 1.0, 0.0, 1e-12);
  checks.add("beta in [1.4390, 1.4395]", beta >= 1.4390 && beta <= 1.4395, beta, 1.43923, 2.5e-4);

  const double a = cfg.a;
  const double cross = oracles::crossing_volume_2d(a);
  checks.add("crossing volume 3a^2/pi", std::abs(cross - 3 * a * a / oracles::kPi) <= 1e-15 * cross,
             cross, 3 * a * a / oracles::kPi, 1e-15);
  const double e_half = oracles::half_disk_energy_2d(cross);
  const double e_rect = oracles::bounded_cylinder_energy(a, 3 * a / oracles::kPi);
  checks.add("half-disk = rectangle at crossing", std::abs(e_half - e_rect) <= 1e-12 * std::abs(e_rect),
             e_half, e_rect, 1e-12);

  const CrossSection unit = CrossSection::interval(1.0);
  const double hstar = oracles::marginal_height(unit);
  checks.add("marginal height 2 sqrt(beta)/pi", std::abs(hstar - 2 * sb / oracles::kPi) < 1e-6,
             hstar, 2 * sb / oracles::kPi, 1e-6);
  checks.add("h = 0.5 not a local minimizer",
             oracles::stability_classify(unit, 0.5).verdict == oracles::Verdict::NotLocalMin, 0.5,
             hstar, 0.0);
  checks.add("h = 1.0 a local minimizer",
             oracles::stability_classify(unit, 1.0).verdict == oracles::Verdict::LocalMin, 1.0,
             hstar, 0.0);

  // Closed-form shapes: half-disk (Gamma = pi r) and flat strip (Gamma = 2a).
  {
    const double c = 0.5;
    const double r = std::sqrt(2 * c / oracles::kPi);
    const auto rel = oracles::c0_relations(c, oracles::half_disk_energy_2d(c), oracles::kPi * r);
    checks.add("c0 relations, half-disk", rel.consistent, rel.c0_identity, rel.c0_lower, 0.1);
    const double h = 1.2;
    const auto rr = oracles::c0_relations(a * h, oracles::bounded_cylinder_energy(a, h), 2 * a);
    checks.add("c0 relations, strip", rr.consistent, rr.c0_identity, rr.c0_lower, 0.1);
  }

  // Matched optimizer runs in the half and full cylinder.
  RunConfig full = cfg;
  full.mode = Mode::Full;
  RunConfig half = cfg;
  half.mode = Mode::Half;
  const OptimizerReport rf = optimize(full, cfg.c);
  const OptimizerReport rh = optimize(half, 0.5 * cfg.c);
  const double dev = oracles::halfcylinder_relation(rh.final_energy, rf.final_energy);
  checks.add("half-cylinder relation (5%)", dev <= 0.05, rh.final_energy, 0.5 * rf.final_energy, 0.05);

  json j;
  j["config"] = config_json(cfg);
  j["beta"] = beta;
  j["crossing_volume"] = cross;
  j["marginal_height"] = hstar;
  j["energy_half"] = rh.final_energy;
  j["energy_full"] = rf.final_energy;
  j["halfcylinder_deviation"] = dev;
  j["checks"] = checks.list;
  j["pass"] = checks.ok;
  write_json(out / "summary.json", j);
  return checks.ok ? 0 : VerificationFailure("verification failed").exit_code();
}

int cmd_enumerate(const RunConfig& cfg, const fs::path& out) {
  if (!cfg.widths.empty()) throw InvalidArgument("enumerate supports N = 2 only");
  const CylinderGrid g(cfg.cross_section(), cfg.L, cfg.n1, 1, cfg.nz, cfg.mode);
  const auto k = static_cast<std::size_t>(cfg.k);
  const BruteForceResult bf = brute_force_min(g, k);
  Rng rng(cfg.seed);
  int matches = 0, beats = 0;
  json starts = json::array();
  const double tol = 1e-9 * std::abs(bf.energy);
  for (int s = 0; s < cfg.starts; ++s) {
    const DomainMask start = random_mask(g, k, rng);
    const SwapResult res = cell_swap_local_search(start);
    const double e = res.report.final_energy;
    if (std::abs(e - bf.energy) <= tol) ++matches;
    if (e < bf.energy - tol) ++beats;
    starts.push_back({{"start", s}, {"energy", e}, {"moves", res.report.moves}});
  }
  bool all_connected = true, all_wall = true;
  for (const DomainMask& m : bf.minimizers) {
    all_connected = all_connected && connectedness_check(m).connected;
    all_wall = all_wall && boundary_decompose(m).wall_measure > 0.0;
  }
  json j;
  j["config"] = config_json(cfg);
  j["n1"] = cfg.n1;
  j["nz"] = cfg.nz;
  j["k"] = cfg.k;
  j["evaluated"] = bf.evaluated;
  j["brute_force_energy"] = bf.energy;
  j["minimizers"] = bf.minimizers.size();
  j["minimizers_connected"] = all_connected;
  j["minimizers_wall_contact"] = all_wall;
  j["swap_matches"] = matches;
  j["swap_beats"] = beats;
  j["starts"] = starts;
  write_json(out / "summary.json", j);
  {
    auto f = open_out(out / "mask.txt");
    write_mask(f, bf.best);
  }
  std::cout << fmt::format("brute force E = {:.12g} over {} masks; swap matched {}/{}\n", bf.energy,
                           bf.evaluated, matches, cfg.starts);
  if (beats > 0) throw VerificationFailure("cell swap beat the exhaustive minimum");
  return 0;
}

}  // namespace

std::vector<double> CRange::values() const {
  std::vector<double> v;
  for (int i = 0;; ++i) {
    const double c = lo + i * step;
    if (c > hi + 1e-3 * step) break;
    v.push_back(c);
  }
  return v;
}

CRange parse_c_range(const std::string& text) {
  CRange r;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> r.lo >> c1 >> r.hi >> c2 >> r.step) || c1 != ':' || c2 != ':' || !in.eof())
    throw InvalidArgument(fmt::format("c-range must be LO:HI:STEP, got '{}'", text));
  if (!(r.lo > 0.0) || !(r.lo < r.hi) || !(r.step > 0.0))
    throw InvalidArgument(fmt::format("c-range needs 0 < LO < HI and STEP > 0, got '{}'", text));
  return r;
}

CrossSection RunConfig::cross_section() const {
  if (widths.size() == 2) return CrossSection::box(widths[0], widths[1]);
  return CrossSection::interval(a);
}

void RunConfig::validate() const {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
    throw InvalidArgument(fmt::format("unknown command '{}'", command));
  if (std::find(kShapes.begin(), kShapes.end(), shape) == kShapes.end())
    throw InvalidArgument(fmt::format("unknown shape '{}'", shape));
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(fmt::format("{} must be > 0", name));
  };
  positive(a, "a");
  positive(L, "L");
  positive(res, "res");
  positive(c, "c");
  if (h) positive(*h, "h");
  if (!widths.empty() && widths.size() != 2) throw InvalidArgument("widths takes two values");
  for (double w : widths) positive(w, "widths");
  if (n1 < 1 || nz < 2 || k < 1 || starts < 0) throw InvalidArgument("invalid enumeration sizes");
  opt.validate();
}

void apply_json(RunConfig& cfg, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "cmd") cfg.command = v.get<std::string>();
      else if (key == "a") cfg.a = v.get<double>();
      else if (key == "widths") cfg.widths = v.get<std::vector<double>>();
      else if (key == "L") cfg.L = v.get<double>();
      else if (key == "res") cfg.res = v.get<double>();
      else if (key == "mode") cfg.mode = parse_mode(v.get<std::string>());
      else if (key == "c") cfg.c = v.get<double>();
      else if (key == "c-range") cfg.c_range = parse_c_range(v.get<std::string>());
      else if (key == "shape") cfg.shape = v.get<std::string>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "out") cfg.out = v.get<std::string>();
      else if (key == "max-iters") cfg.opt.max_iters = v.get<int>();
      else if (key == "sym-every") cfg.opt.symmetrize_every = v.get<int>();
      else if (key == "reinit-every") cfg.opt.reinit_every = v.get<int>();
      else if (key == "cfl") cfg.opt.cfl = v.get<double>();
      else if (key == "window") cfg.opt.window = v.get<int>();
      else if (key == "energy-rtol") cfg.opt.energy_rtol = v.get<double>();
      else if (key == "speed-floor") cfg.opt.speed_floor = v.get<double>();
      else if (key == "smoothing") cfg.opt.smoothing = v.get<double>();
      else if (key == "h") cfg.h = v.get<double>();
      else if (key == "tilt") cfg.tilt = v.get<double>();
      else if (key == "vtk") cfg.vtk = v.is_boolean() ? v.get<bool>() : parse_on_off(v.get<std::string>());
      else if (key == "n1") cfg.n1 = v.get<int>();
      else if (key == "nz") cfg.nz = v.get<int>();
      else if (key == "k") cfg.k = v.get<int>();
      else if (key == "starts") cfg.starts = v.get<int>();
      else throw InvalidArgument(fmt::format("unknown config key '{}'", key));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(fmt::format("bad config value: {}", e.what()));
  }
}

std::optional<RunConfig> parse_args(int argc, char** argv) {
  RunConfig cfg;
  // The config file is applied first so that flags override it.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream f(argv[i + 1]);
      if (!f) throw InvalidArgument(fmt::format("cannot read config {}", argv[i + 1]));
      std::stringstream ss;
      ss << f.rdbuf();
      apply_json(cfg, ss.str());
    }
  }

  CLI::App app{"Torsion energies and shape optimization in a cylinder"};
  app.set_help_flag("--help", "print this help");
  std::string config_path, mode = to_string(cfg.mode), c_range, vtk = cfg.vtk ? "on" : "off";
  double tilt = 0.0, height = 0.0;
  app.add_option("--config", config_path, "JSON file with flat keys named like the flags");
  app.add_option("--cmd", cfg.command, "solve|symmetrize|optimize|sweep|verify|enumerate");
  app.add_option("--a", cfg.a, "cross-section width");
  app.add_option("--widths", cfg.widths, "two widths for a 3-D box cross-section")->expected(2);
  app.add_option("--L", cfg.L, "truncation half-length");
  app.add_option("--res", cfg.res, "cells per unit length");
  app.add_option("--mode", mode, "full|half");
  app.add_option("--c", cfg.c, "target volume");
  app.add_option("--c-range", c_range, "LO:HI:STEP for sweep");
  app.add_option("--shape", cfg.shape, "rect|halfdisk|disk|blob|auto|random");
  app.add_option("--seed", cfg.seed);
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--max-iters", cfg.opt.max_iters);
  app.add_option("--sym-every", cfg.opt.symmetrize_every);
  app.add_option("--reinit-every", cfg.opt.reinit_every);
  app.add_option("--cfl", cfg.opt.cfl);
  app.add_option("--window", cfg.opt.window);
  app.add_option("--energy-rtol", cfg.opt.energy_rtol);
  app.add_option("--speed-floor", cfg.opt.speed_floor);
  app.add_option("--smoothing", cfg.opt.smoothing, "speed averaging radius in grid spacings");
  auto* h_opt = app.add_option("--h", height, "solve: flat cylinder of this height");
  auto* tilt_opt = app.add_option("--tilt", tilt, "initial cos(pi x/a) perturbation amplitude");
  app.add_option("--vtk", vtk, "on|off");
  app.add_option("--n1", cfg.n1, "enumerate: cells across");
  app.add_option("--nz", cfg.nz, "enumerate: axial cells");
  app.add_option("--k", cfg.k, "enumerate: cells in the mask");
  app.add_option("--starts", cfg.starts, "enumerate: seeded cell-swap starts");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw InvalidArgument(e.what());
  }
  cfg.mode = parse_mode(mode);
  if (!c_range.empty()) cfg.c_range = parse_c_range(c_range);
  cfg.vtk = parse_on_off(vtk);
  if (tilt_opt->count() > 0) cfg.tilt = tilt;
  if (h_opt->count() > 0) cfg.h = height;
  cfg.validate();
  return cfg;
}

Shape preset_shape(const CylinderGrid& g, const std::string& name, double c) {
  const CrossSection& cs = g.cross_section();
  const int N = g.dimension();
  const double a = cs.width(0);
  // The presets are symmetric in z, so half mode keeps half of a shape of
  // volume 2c.
  const double vol = g.half() ? 2.0 * c : c;
  const std::string kind =
      name == "auto" ? (N == 3 || c <= oracles::crossing_volume_2d(a) ? "halfdisk" : "blob") : name;
  if (kind == "rect") return BoundedCylinder{vol / cs.measure()};
  if (kind == "halfdisk") {
    const double r = std::pow(2.0 * vol / oracles::unit_ball_measure(N), 1.0 / N);
    return HalfDisk{Wall::Left, r, 0.0};
  }
  if (kind == "disk") {
    const double r = std::pow(vol / oracles::unit_ball_measure(N), 1.0 / N);
    Point centre{0.5 * a, N == 3 ? 0.5 * cs.width(1) : 0.0, 0.0};
    return Disk{centre, r};
  }
  if (kind == "blob") {
    if (N != 2) throw InvalidArgument("the blob preset is 2-D only");
    // Half-ellipse with x1 semi-axis 1.25 a, clipped by the right wall. The
    // optimizer corrects the volume.
    const double ax = 1.25 * a;
    const double az = 2.0 * vol / (oracles::kPi * ax);
    return CustomShape{[ax, az](const Point& p) {
      return (p.x1 / ax) * (p.x1 / ax) + (p.z / az) * (p.z / az) < 1.0;
    }};
  }
  throw InvalidArgument(fmt::format("shape '{}' has no preset", name));
}

double default_tilt(const std::string& shape, double a) { return shape == "rect" ? 0.03 * a : 0.0; }

OptimizerReport optimize(const RunConfig& cfg, double c) {
  if (!cfg.widths.empty()) throw InvalidArgument("the optimizer supports N = 2 only");
  const CylinderGrid g = make_grid(cfg);
  OptimizerConfig oc = cfg.opt;
  oc.seed = cfg.seed;
  oc.init_tilt = cfg.tilt.value_or(default_tilt(cfg.shape, cfg.a));
  return run(init_levelset(g, preset_shape(g, cfg.shape, c), c, oc), oc);
}

int dispatch(const RunConfig& cfg) {
  try {
    cfg.validate();
    const fs::path out(cfg.out);
    fs::create_directories(out);
    if (cfg.command == "solve") return cmd_solve(cfg, out);
    if (cfg.command == "symmetrize") return cmd_symmetrize(cfg, out);
    if (cfg.command == "optimize") return cmd_optimize(cfg, out);
    if (cfg.command == "sweep") return cmd_sweep(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    return cmd_enumerate(cfg, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cylt::app
