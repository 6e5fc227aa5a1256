#include "reflex/sim/grasping.hpp"

#include <cmath>

#include "reflex/sim/motor.hpp"
#include "reflex/sim/pepper.hpp"

namespace reflex::sim {

dsl::PrimitiveRegistry grasping_registry() {
    dsl::PrimitiveRegistry r;
    r.motors = {
        {"head_search", std::string(resource::head), false},
        {"look_at", std::string(resource::head), true},
        {"grasp", std::string(resource::arm), true},
    };
    r.sensors = {{"ball_detection", {"ball"}}};
    r.targets = {"ball"};
    r.evaluations = {"seen", "close"};
    return r;
}

engine::Bindings grasping_bindings(const AgentParams& params) {
    engine::Bindings b;
    b.sensors["ball_detection"] = [](const WorldState& w) {
        const Vec2 ball = w.visitor.position;
        const double gaze = w.agent.body_yaw + w.agent.head_yaw;
        const bool in_view = std::abs(wrap_angle(bearing(w.agent.position, ball) - gaze)) <= ball_fov;
        return std::vector<engine::TargetObservation>{{"ball", ball, in_view}};
    };
    // Sweeps the head back and forth over its range.
    b.motors["head_search"] = [params](const std::optional<Vec2>&, const WorldState& w) -> ResourceCommand {
        const double goal = params.head_limit * std::sin(0.5 * w.time);
        return HeadRateCommand{clamp_abs(params.k_head * (goal - w.agent.head_yaw), params.head_rate_max)};
    };
    b.motors["look_at"] = [params](const std::optional<Vec2>& target, const WorldState& w) {
        return motor_command("look_at", target, w.agent, params);
    };
    b.motors["grasp"] = [params](const std::optional<Vec2>& target, const WorldState& w) {
        return motor_command("point_toward", target, w.agent, params);
    };
    const engine::Bindings pepper = pepper_bindings(params);
    b.evaluations["seen"] = pepper.evaluations.at("seen");
    b.evaluations["close"] = pepper.evaluations.at("close");
    return b;
}

}  // namespace reflex::sim
