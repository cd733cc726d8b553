#pragma once

#include <memory>
#include <vector>

#include "ntn/entities/simulation.hpp"
#include "ntn/scenario/config.hpp"
#include "ntn/scenario/deploy.hpp"

namespace ntn::scenario {

/// Satellites on the x axis moving at +V: SAT_1 first, each further one
/// trailing by the inter-satellite distance. At t = 0 the SAT_1/SAT_2 bisector
/// lies lead_in_km behind the field's trailing edge.
std::vector<geometry::SatelliteTrack> place_satellites(const ScenarioConfig& cfg);

/// Time for the bisector to sweep the whole field and for the last UE to
/// leave SAT_1, plus a full retransmission budget; rounded up to 100 ms.
des::SimTime default_t_end(const ScenarioConfig& cfg);

des::DelayModel delay_model(const ScenarioConfig& cfg);

struct BuiltScenario {
  entities::SimulationSetup setup;
  Grouping grouping;
};

/// Validates `cfg` (throws ConfigError) and lays out the experiment.
BuiltScenario build_setup(const ScenarioConfig& cfg);

std::unique_ptr<entities::Simulation> build_simulation(const ScenarioConfig& cfg);

}  // namespace ntn::scenario
