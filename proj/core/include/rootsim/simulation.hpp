#pragma once

#include "rootsim/scenario_config.hpp"
#include "rootsim/simulation_log.hpp"

namespace rootsim {

/// Grows the root until the target is reached, the attempts run out, or an operation fails.
/// Records are forwarded to `sink` (if any) as soon as they exist.
SimulationLog run_simulation(const ScenarioConfig& config, LogSink* sink = nullptr);

}  // namespace rootsim
