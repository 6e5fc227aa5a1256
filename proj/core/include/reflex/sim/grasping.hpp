#pragma once

#include "reflex/dsl/registry.hpp"
#include "reflex/engine/bindings.hpp"
#include "reflex/sim/world.hpp"

namespace reflex::sim {

/// Half-angle of the head camera's field of view, rad.
inline constexpr double ball_fov = 0.8;

/// Ball-grasping primitive set: ball_detection, head_search, look_at and grasp
/// on the head and arm resources, with the `seen`/`close` evaluations. The
/// moving object of the corridor world stands in for the ball.
dsl::PrimitiveRegistry grasping_registry();

engine::Bindings grasping_bindings(const AgentParams& params);

}  // namespace reflex::sim
