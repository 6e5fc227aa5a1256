#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "reflex/sim/world.hpp"

namespace reflex::sim {

class UnknownPrimitive : public std::runtime_error {
public:
    explicit UnknownPrimitive(const std::string& name)
        : std::runtime_error("unknown motor primitive '" + name + "'") {}
};

/// Resource names of the wheeled humanoid used throughout the project.
namespace resource {
inline constexpr std::string_view wheels_rotation = "wheels_rotation";
inline constexpr std::string_view wheels_translation = "wheels_translation";
inline constexpr std::string_view head = "head";
inline constexpr std::string_view arm = "arm";
}  // namespace resource

/// Computes the command the named motor primitive issues for its resource.
///
/// turn_toward, go_toward, look_at and point_toward need a target and throw
/// std::invalid_argument without one.
ResourceCommand motor_command(std::string_view primitive,
                              const std::optional<Vec2>& target,
                              const AgentState& agent,
                              const AgentParams& params);

/// Explicit first-order integration of the agent under `commands`. Empty
/// command slots are zeroed. Limits are re-applied after integration.
AgentState integrate_agent(const AgentState& agent,
                           const MotorCommands& commands,
                           const AgentParams& params,
                           const Bounds& bounds,
                           double dt);

}  // namespace reflex::sim
