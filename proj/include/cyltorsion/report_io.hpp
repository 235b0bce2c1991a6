#pragma once

#include <iosfwd>

#include "json.hpp"

#include "cyltorsion/optimizer.hpp"
#include "cyltorsion/torsion.hpp"

namespace cylt {

nlohmann::json solve_summary(const DomainMask& mask, const TorsionSolution& solution);

nlohmann::json to_json(const OptimizerReport& report);

/// Columns iter, energy, volume, c0_estimate, gamma_length.
void write_history_csv(std::ostream& out, const std::vector<StepRecord>& history);

}  // namespace cylt
