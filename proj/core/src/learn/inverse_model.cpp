#include "reflex/learn/inverse_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "reflex/sim/motor.hpp"
#include "reflex/sim/pepper.hpp"

namespace reflex::learn {
namespace {

using sim::AgentState;
using sim::ArmMode;
using sim::Vec2;
using sim::WorldState;

Vec2 target_at(const WorldState& w, const std::string& target) {
    const auto p = sim::target_position(w, target);
    if (!p) throw std::invalid_argument("no inverse model for target '" + target + "'");
    return *p;
}

/// Agent state after one step with only `resource` driven by `command`; the
/// other channels keep their observed values.
struct Predictor {
    sim::AgentParams params;
    sim::Bounds bounds;
    double dt = 0.02;

    WorldState operator()(const WorldState& prev, const WorldState& cur, const std::string& resource,
                          const std::optional<sim::ResourceCommand>& command) const {
        sim::MotorCommands cmds;
        if (command) cmds.apply(*command);
        const AgentState stepped = sim::integrate_agent(prev.agent, cmds, params, bounds, dt);
        WorldState out = cur;
        if (resource == sim::resource::wheels_rotation) {
            out.agent.body_yaw = stepped.body_yaw;
        } else if (resource == sim::resource::wheels_translation) {
            out.agent.position = stepped.position;
        } else if (resource == sim::resource::head) {
            out.agent.head_yaw = stepped.head_yaw;
        } else if (resource == sim::resource::arm) {
            out.agent.arm = stepped.arm;
        }
        return out;
    }
};

double yaw_rate(const WorldState& prev, const WorldState& cur, double dt) {
    return sim::wrap_angle(cur.agent.body_yaw - prev.agent.body_yaw) / dt;
}

double speed(const WorldState& prev, const WorldState& cur, double dt) {
    return sim::norm(cur.agent.position - prev.agent.position) / dt;
}

double head_rate(const WorldState& prev, const WorldState& cur, double dt) {
    return (cur.agent.head_yaw - prev.agent.head_yaw) / dt;
}

double arm_engaged(const WorldState&, const WorldState& cur) {
    return cur.agent.arm.mode == ArmMode::idle ? 0.0 : 1.0;
}

double gaze_error(const WorldState& w, const Vec2& target) {
    return sim::wrap_angle(sim::bearing(w.agent.position, target) - w.agent.body_yaw - w.agent.head_yaw);
}

TransitionFeature observed_and_predicted(const TransitionFeature& feature, const Predictor& predict,
                                         const std::string& resource, const std::string& primitive,
                                         const std::optional<std::string>& target,
                                         const sim::AgentParams& params) {
    return [=](const WorldState& prev, const WorldState& cur) {
        std::optional<Vec2> where;
        if (target) where = target_at(prev, *target);
        const auto command = sim::motor_command(primitive, where, prev.agent, params);
        return feature(prev, predict(prev, cur, resource, command));
    };
}

}  // namespace

std::vector<InverseModel> InverseModelSet::for_resource(const std::string& resource) const {
    std::vector<InverseModel> out;
    for (const auto& m : associations) {
        if (m.resource == resource) out.push_back(m);
    }
    return out;
}

double emission_loglik(const InverseModel& model, const WorldState& prev, const WorldState& cur, double scale) {
    const double r = (model.predicted(prev, cur) - model.feature(prev, cur)) / scale;
    return -(r * r) / (2.0 * model.sigma * model.sigma);
}

InverseModelSet pepper_inverse_models(const dsl::PrimitiveRegistry& registry, const sim::AgentParams& params,
                                      const sim::Bounds& bounds, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    const Predictor predict{params, bounds, dt};

    const TransitionFeature rotation = [dt](const WorldState& a, const WorldState& b) { return yaw_rate(a, b, dt); };
    const TransitionFeature translation = [dt](const WorldState& a, const WorldState& b) { return speed(a, b, dt); };
    const TransitionFeature head = [dt](const WorldState& a, const WorldState& b) { return head_rate(a, b, dt); };
    const TransitionFeature arm = arm_engaged;

    auto rest_model = [&](const std::string& resource, const TransitionFeature& feature) {
        InverseModel m;
        m.resource = resource;
        m.feature = feature;
        m.predicted = [=](const WorldState& prev, const WorldState& cur) {
            return feature(prev, predict(prev, cur, resource, std::nullopt));
        };
        return m;
    };

    InverseModelSet set;
    for (const auto& resource : registry.resources()) {
        if (resource == sim::resource::wheels_rotation) {
            set.rest.emplace(resource, rest_model(resource, rotation));
        } else if (resource == sim::resource::wheels_translation) {
            set.rest.emplace(resource, rest_model(resource, translation));
        } else if (resource == sim::resource::head) {
            set.rest.emplace(resource, rest_model(resource, head));
        } else if (resource == sim::resource::arm) {
            set.rest.emplace(resource, rest_model(resource, arm));
        }
    }

    for (const auto& a : registry.association_universe()) {
        InverseModel m;
        m.association = a;
        m.resource = registry.resource_of(a);
        const std::string& p = a.primitive;
        TransitionFeature feature;
        if (p == "turn_toward" || p == "turn_stop") {
            feature = rotation;
        } else if (p == "go_stop") {
            feature = translation;
        } else if (p == "go_toward") {
            const std::string target = *a.target;
            feature = [dt, target](const WorldState& prev, const WorldState& cur) {
                const Vec2 to = target_at(prev, target) - prev.agent.position;
                const double range = sim::norm(to);
                if (range <= 0.0) return 0.0;
                return sim::dot(cur.agent.position - prev.agent.position, to) / (range * dt);
            };
        } else if (p == "look_at") {
            const std::string target = *a.target;
            feature = [dt, target](const WorldState& prev, const WorldState& cur) {
                return sim::wrap_angle(gaze_error(cur, target_at(cur, target)) -
                                       gaze_error(prev, target_at(prev, target))) / dt;
            };
        } else if (p == "point_toward") {
            const std::string target = *a.target;
            feature = [target](const WorldState& prev, const WorldState& cur) {
                if (cur.agent.arm.mode != ArmMode::pointing) return std::numbers::pi;
                const double want = sim::bearing(prev.agent.position, target_at(prev, target));
                return std::abs(sim::wrap_angle(cur.agent.arm.angle - want));
            };
        } else if (p == "waving") {
            feature = [dt](const WorldState& prev, const WorldState& cur) {
                if (cur.agent.arm.mode != ArmMode::waving) return 0.0;
                const double from = prev.agent.arm.mode == ArmMode::waving ? prev.agent.arm.angle : 0.0;
                return sim::wrap_phase(cur.agent.arm.angle - from) / dt;
            };
        } else if (p == "arm_freeze") {
            feature = arm;
        } else {
            throw sim::UnknownPrimitive(p);
        }
        m.feature = feature;
        m.predicted = observed_and_predicted(feature, predict, m.resource, p, a.target, params);
        set.associations.push_back(std::move(m));
    }
    return set;
}

}  // namespace reflex::learn
