#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reflex/engine/memory.hpp"
#include "reflex/sim/world.hpp"

namespace reflex::engine {

struct TargetObservation {
    std::string target;
    sim::Vec2 position;
    bool visible = true;
};

using SensorFn = std::function<std::vector<TargetObservation>(const sim::WorldState&)>;
using MotorFn = std::function<sim::ResourceCommand(const std::optional<sim::Vec2>& target,
                                                   const sim::WorldState&)>;
/// Named evaluation; `self` is the agent's own state and `target` the target
/// of the statement it guards.
using EvaluationFn = std::function<bool(const Memory&, const sim::AgentState& self,
                                        const std::optional<std::string>& target)>;
/// Feature value read from memory; nothing when its targets are unknown.
using FeatureFn = std::function<std::optional<double>(const Memory&)>;

/// Runtime implementations behind the names of a PrimitiveRegistry.
struct Bindings {
    std::map<std::string, SensorFn> sensors;
    std::map<std::string, MotorFn> motors;
    std::map<std::string, EvaluationFn> evaluations;
    std::map<std::string, FeatureFn> features;
};

}  // namespace reflex::engine
