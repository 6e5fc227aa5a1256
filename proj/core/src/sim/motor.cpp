#include "reflex/sim/motor.hpp"

#include <algorithm>
#include <cmath>

namespace reflex::sim {
namespace {

Vec2 require_target(std::string_view primitive, const std::optional<Vec2>& target) {
    if (!target) {
        throw std::invalid_argument("motor primitive '" + std::string(primitive) +
                                    "' requires a target");
    }
    return *target;
}

}  // namespace

ResourceCommand motor_command(std::string_view primitive,
                              const std::optional<Vec2>& target,
                              const AgentState& agent,
                              const AgentParams& params) {
    if (primitive == "turn_toward") {
        const Vec2 t = require_target(primitive, target);
        const double error = wrap_angle(bearing(agent.position, t) - agent.body_yaw);
        return YawRateCommand{clamp_abs(params.k_omega * error, params.omega_max)};
    }
    if (primitive == "turn_stop") {
        return YawRateCommand{0.0};
    }
    if (primitive == "go_toward") {
        const Vec2 t = require_target(primitive, target);
        const Vec2 delta = t - agent.position;
        const double range = norm(delta);
        const double speed = std::clamp(params.k_v * (range - params.d_safe), 0.0, params.v_max);
        if (speed <= 0.0 || range <= 0.0) return VelocityCommand{};
        return VelocityCommand{delta * (speed / range)};
    }
    if (primitive == "go_stop") {
        return VelocityCommand{};
    }
    if (primitive == "look_at") {
        const Vec2 t = require_target(primitive, target);
        const double relative = wrap_angle(bearing(agent.position, t) - agent.body_yaw);
        const double desired = clamp_abs(relative, params.head_limit);
        return HeadRateCommand{
            clamp_abs(params.k_head * (desired - agent.head_yaw), params.head_rate_max)};
    }
    if (primitive == "point_toward") {
        const Vec2 t = require_target(primitive, target);
        return ArmDirective{ArmDirective::Kind::point_at, bearing(agent.position, t)};
    }
    if (primitive == "waving") {
        return ArmDirective{ArmDirective::Kind::wave, 0.0};
    }
    if (primitive == "arm_freeze") {
        return ArmDirective{ArmDirective::Kind::freeze, 0.0};
    }
    throw UnknownPrimitive(std::string(primitive));
}

AgentState integrate_agent(const AgentState& agent,
                           const MotorCommands& commands,
                           const AgentParams& params,
                           const Bounds& bounds,
                           double dt) {
    AgentState next = agent;

    const double yaw_rate = clamp_abs(commands.wheels_rotation.value_or(0.0), params.omega_max);
    next.body_yaw_rate = yaw_rate;
    if (yaw_rate != 0.0) next.body_yaw = wrap_angle(agent.body_yaw + yaw_rate * dt);

    Vec2 velocity = commands.wheels_translation.value_or(Vec2{});
    const double speed = norm(velocity);
    if (speed > params.v_max) velocity = velocity * (params.v_max / speed);
    if (velocity.x != 0.0 || velocity.y != 0.0) {
        next.position = bounds.clamp(agent.position + velocity * dt);
    }
    next.linear_velocity = velocity;

    const double head_rate = clamp_abs(commands.head.value_or(0.0), params.head_rate_max);
    if (head_rate != 0.0) {
        next.head_yaw = clamp_abs(agent.head_yaw + head_rate * dt, params.head_limit);
    }

    if (!commands.arm || commands.arm->kind == ArmDirective::Kind::freeze) {
        next.arm = ArmState{};
    } else if (commands.arm->kind == ArmDirective::Kind::point_at) {
        next.arm = ArmState{ArmMode::pointing, wrap_angle(commands.arm->direction)};
    } else {
        const double phase = agent.arm.mode == ArmMode::waving ? agent.arm.angle : 0.0;
        next.arm = ArmState{ArmMode::waving, wrap_phase(phase + params.wave_rate * dt)};
    }
    return next;
}

}  // namespace reflex::sim
