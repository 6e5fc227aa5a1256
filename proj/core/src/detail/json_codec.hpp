#pragma once

// Internal JSON helpers shared by the file formats and the wire protocol.

#include <json.hpp>

#include "reflex/sim/world.hpp"

namespace reflex::detail {

inline nlohmann::json point_json(sim::Vec2 v) { return nlohmann::json{{"x", v.x}, {"y", v.y}}; }

inline sim::Vec2 read_point(const nlohmann::json& j) {
    return {j.at("x").get<double>(), j.at("y").get<double>()};
}

/// Dataset record fields for one world state.
inline nlohmann::json world_json(const sim::WorldState& w) {
    return nlohmann::json{
        {"t", w.time},
        {"agent",
         {{"x", w.agent.position.x},
          {"y", w.agent.position.y},
          {"body_yaw", w.agent.body_yaw},
          {"head_yaw", w.agent.head_yaw},
          {"arm_mode", std::string(sim::to_string(w.agent.arm.mode))},
          {"arm_dir", w.agent.arm.angle}}},
        {"visitor", point_json(w.visitor.position)},
        {"stand", point_json(w.stand)},
        {"front_of_stand", point_json(w.front_of_stand)},
    };
}

inline sim::WorldState read_world(const nlohmann::json& j) {
    sim::WorldState w;
    w.time = j.at("t").get<double>();
    const auto& a = j.at("agent");
    w.agent.position = read_point(a);
    w.agent.body_yaw = a.at("body_yaw").get<double>();
    w.agent.head_yaw = a.at("head_yaw").get<double>();
    w.agent.arm.mode = sim::arm_mode_from_string(a.at("arm_mode").get<std::string>());
    w.agent.arm.angle = a.value("arm_dir", 0.0);
    w.visitor.position = read_point(j.at("visitor"));
    w.stand = read_point(j.at("stand"));
    w.front_of_stand = read_point(j.at("front_of_stand"));
    return w;
}

inline nlohmann::json commands_json(const sim::MotorCommands& c) {
    using nlohmann::json;
    json j;
    j["wheels_rotation"] = c.wheels_rotation ? json(*c.wheels_rotation) : json(nullptr);
    j["wheels_translation"] = c.wheels_translation ? point_json(*c.wheels_translation) : json(nullptr);
    j["head"] = c.head ? json(*c.head) : json(nullptr);
    if (c.arm) {
        const char* kind = c.arm->kind == sim::ArmDirective::Kind::point_at ? "point_at"
                           : c.arm->kind == sim::ArmDirective::Kind::wave   ? "wave"
                                                                            : "freeze";
        j["arm"] = json{{"kind", kind}, {"direction", c.arm->direction}};
    } else {
        j["arm"] = nullptr;
    }
    return j;
}

}  // namespace reflex::detail
