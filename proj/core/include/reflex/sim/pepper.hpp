#pragma once

#include <optional>
#include <string_view>

#include "reflex/dsl/registry.hpp"
#include "reflex/engine/bindings.hpp"
#include "reflex/sim/world.hpp"

namespace reflex::sim {

/// Agent-to-target range under which the `close` evaluation holds.
inline constexpr double close_range = 1.0;

/// The wheeled humanoid's primitive set: eight motor primitives on four
/// resources, three targets (visitor, stand, front_of_stand), the sensors
/// tracking them, the `seen`/`close` evaluations and the visitor-stand
/// distance feature `d`.
dsl::PrimitiveRegistry pepper_registry();

/// Ground-truth position of a named target in the world, if it exists.
std::optional<Vec2> target_position(const WorldState& world, std::string_view target);

/// Runtime implementations of pepper_registry() on the kinematic world.
engine::Bindings pepper_bindings(const AgentParams& params);

}  // namespace reflex::sim
