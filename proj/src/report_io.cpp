#include "cyltorsion/report_io.hpp"

#include <fmt/format.h>

#include <ostream>

namespace cylt {

nlohmann::json solve_summary(const DomainMask& mask, const TorsionSolution& s) {
  const GradientStats stats = summarize(s.boundary_gradient);
  nlohmann::json j;
  j["volume"] = mask.volume();
  j["cells"] = mask.cell_count();
  j["energy"] = s.energy;
  j["energy_dirichlet"] = s.energy_dirichlet;
  j["energy_consistency_bound"] = s.energy_consistency_bound;
  j["residual"] = s.residual;
  j["iterations"] = s.iterations;
  j["c0_estimate"] = stats.c0_estimate;
  j["g_rel_stddev"] = stats.rel_stddev;
  const BoundarySegments b = boundary_decompose(mask);
  j["gamma_staircase"] = b.free_measure;
  j["wall_measure"] = b.wall_measure;
  if (mask.grid().dimension() == 2) {
    // Zero contour of the mask's signed indicator: cells at -1 inside, +1 outside.
    std::vector<double> ind(mask.grid().cell_count());
    for (std::size_t i = 0; i < ind.size(); ++i) ind[i] = mask.contains(i) ? -1.0 : 1.0;
    j["gamma_length"] = contour_length(mask.grid(), ind, 0.0);
  }
  return j;
}

nlohmann::json to_json(const OptimizerReport& r) {
  nlohmann::json j;
  j["target_volume"] = r.target_volume;
  j["final_volume"] = r.final_volume;
  j["final_energy"] = r.final_energy;
  j["gamma_length"] = r.gamma_length;
  j["gamma_staircase"] = r.gamma_staircase;
  j["g_mean"] = r.g_mean;
  j["g_rel_stddev"] = r.g_rel_stddev;
  j["c0_estimate"] = r.c0_estimate;
  j["c0_identity"] = r.c0.c0_identity;
  j["c0_lower"] = r.c0.c0_lower;
  j["c0_consistent"] = r.c0.consistent;
  j["connected"] = r.connected;
  j["components"] = r.components;
  j["wall_contact"] = r.wall_contact;
  j["wall_measure"] = r.wall_measure;
  j["contact_left"] = r.contact_left;
  j["contact_right"] = r.contact_right;
  auto angles = nlohmann::json::array();
  for (const auto& a : r.contact_angles)
    angles.push_back({{"wall", a.wall == Wall::Left ? "left" : "right"},
                      {"branch", a.upper ? "upper" : "lower"},
                      {"degrees", a.degrees}});
  j["contact_angles"] = angles;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["monotonicity_violations"] = r.monotonicity_violations;
  j["monotonicity_checked"] = r.monotonicity_checked;
  return j;
}

void write_history_csv(std::ostream& out, const std::vector<StepRecord>& history) {
  out << "iter,energy,volume,c0_estimate,gamma_length\n";
  for (const auto& h : history)
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", h.iter, h.energy, h.volume,
                       h.c0_estimate, h.gamma_length);
}

}  // namespace cylt
