#include "reflex/sim/pepper.hpp"

#include "reflex/sim/motor.hpp"

namespace reflex::sim {

dsl::PrimitiveRegistry pepper_registry() {
    dsl::PrimitiveRegistry r;
    const std::string rotation(resource::wheels_rotation);
    const std::string translation(resource::wheels_translation);
    r.motors = {
        {"turn_toward", rotation, true},
        {"turn_stop", rotation, false},
        {"go_toward", translation, true},
        {"go_stop", translation, false},
        {"look_at", std::string(resource::head), true},
        {"point_toward", std::string(resource::arm), true},
        {"waving", std::string(resource::arm), false},
        {"arm_freeze", std::string(resource::arm), false},
    };
    r.sensors = {
        {"visitor_detection", {"visitor"}},
        {"stand_tracking", {"stand", "front_of_stand"}},
    };
    r.targets = {"visitor", "stand", "front_of_stand"};
    r.evaluations = {"seen", "close"};
    r.features = {{"d", {"visitor", "stand"}}};
    return r;
}

std::optional<Vec2> target_position(const WorldState& world, std::string_view target) {
    if (target == "visitor") return world.visitor.position;
    if (target == "stand") return world.stand;
    if (target == "front_of_stand") return world.front_of_stand;
    return std::nullopt;
}

engine::Bindings pepper_bindings(const AgentParams& params) {
    engine::Bindings b;
    b.sensors["visitor_detection"] = [](const WorldState& w) {
        return std::vector<engine::TargetObservation>{{"visitor", w.visitor.position, true}};
    };
    b.sensors["stand_tracking"] = [](const WorldState& w) {
        return std::vector<engine::TargetObservation>{{"stand", w.stand, true},
                                                      {"front_of_stand", w.front_of_stand, true}};
    };
    for (const auto& m : pepper_registry().motors) {
        b.motors[m.name] = [name = m.name, params](const std::optional<Vec2>& target, const WorldState& w) {
            return motor_command(name, target, w.agent, params);
        };
    }
    b.evaluations["seen"] = [](const engine::Memory& m, const AgentState&, const std::optional<std::string>& target) {
        return target && m.visible(*target);
    };
    b.evaluations["close"] = [](const engine::Memory& m, const AgentState& self,
                                const std::optional<std::string>& target) {
        if (!target) return false;
        const auto p = m.position(*target);
        return p && distance(self.position, *p) < close_range;
    };
    b.features["d"] = [](const engine::Memory& m) -> std::optional<double> {
        const auto visitor = m.position("visitor");
        const auto stand = m.position("stand");
        if (!visitor || !stand) return std::nullopt;
        return distance(*visitor, *stand);
    };
    return b;
}

}  // namespace reflex::sim
