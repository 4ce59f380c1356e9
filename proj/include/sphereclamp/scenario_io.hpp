#ifndef SPHERECLAMP_SCENARIO_IO_HPP
#define SPHERECLAMP_SCENARIO_IO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sphereclamp/sim.hpp"

namespace sphereclamp::io {

/// Scenario <-> JSON. Infinite values are written as the string "inf".
/// Parse failures raise sim::ValidationError with field paths.
nlohmann::json scenario_to_json(const sim::Scenario& scenario);
sim::Scenario scenario_from_json(const nlohmann::json& j);

sim::Scenario load_scenario_file(const std::filesystem::path& path);
void save_scenario_file(const sim::Scenario& scenario, const std::filesystem::path& path);

/// Apply one `key=value` override. Keys: dt, p_e, r_e, step_distance, horizon.
/// r_e accepts radians, "inf", or a "deg" suffix.
void apply_override(sim::Scenario& scenario, const std::string& assignment);

}  // namespace sphereclamp::io

#endif
