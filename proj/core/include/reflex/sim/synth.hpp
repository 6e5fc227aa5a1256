#pragma once

#include <cstdint>

#include "reflex/dsl/validate.hpp"
#include "reflex/sim/dataset.hpp"
#include "reflex/sim/scenario.hpp"

namespace reflex::sim {

/// Upper bound on the length of a synthesized demonstration.
inline constexpr double max_demo_seconds = 120.0;

/// Runs `script` closed loop in the scenario and records every tick. Each
/// sample keeps the association ids that were driving a resource at that tick
/// as ground-truth labels.
Dataset synth_demo(const dsl::CheckedScript& script, const Scenario& scenario, std::uint64_t seed,
                   double hz);

}  // namespace reflex::sim
