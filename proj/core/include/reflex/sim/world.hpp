#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "reflex/sim/geometry.hpp"

namespace reflex::sim {

enum class ArmMode { idle, pointing, waving };

std::string_view to_string(ArmMode mode);
ArmMode arm_mode_from_string(std::string_view text);

/// Arm configuration. `angle` is the world-frame pointing direction while
/// pointing and the wave phase while waving; it is 0 when idle.
struct ArmState {
    ArmMode mode = ArmMode::idle;
    double angle = 0.0;

    friend bool operator==(const ArmState&, const ArmState&) = default;
};

struct AgentState {
    Vec2 position;
    double body_yaw = 0.0;
    double body_yaw_rate = 0.0;
    Vec2 linear_velocity;
    double head_yaw = 0.0;  ///< relative to the body
    ArmState arm;

    friend bool operator==(const AgentState&, const AgentState&) = default;
};

struct VisitorState {
    Vec2 position;
    Vec2 velocity;

    friend bool operator==(const VisitorState&, const VisitorState&) = default;
};

struct WorldState {
    double time = 0.0;
    AgentState agent;
    VisitorState visitor;
    Vec2 stand;
    Vec2 front_of_stand;

    friend bool operator==(const WorldState&, const WorldState&) = default;
};

/// Visitor to stand distance, the feature the learned evaluations threshold on.
inline double interaction_distance(const WorldState& w) {
    return distance(w.visitor.position, w.stand);
}

/// Kinematic limits and controller gains of the agent.
struct AgentParams {
    double v_max = 0.5;          ///< m/s
    double omega_max = 1.0;      ///< rad/s
    double d_safe = 0.6;         ///< m
    double k_omega = 1.5;
    double k_v = 0.8;
    double head_limit = 1.0;     ///< rad, relative to body
    double k_head = 2.0;
    double head_rate_max = 4.0;  ///< rad/s
    double wave_rate = 2.0 * std::numbers::pi;  ///< rad/s of wave phase
};

struct Bounds {
    double length = 5.0;  ///< x extent, m
    double width = 3.0;   ///< y extent, m

    Vec2 clamp(Vec2 p) const;
    bool contains(Vec2 p, double tolerance = 1e-9) const;
};

// Per-resource commands.

struct ArmDirective {
    enum class Kind { point_at, wave, freeze };
    Kind kind = Kind::freeze;
    double direction = 0.0;  ///< world-frame bearing, used by point_at

    friend bool operator==(const ArmDirective&, const ArmDirective&) = default;
};

struct YawRateCommand { double rate = 0.0; };
struct VelocityCommand { Vec2 velocity; };
struct HeadRateCommand { double rate = 0.0; };

using ResourceCommand = std::variant<YawRateCommand, VelocityCommand, HeadRateCommand, ArmDirective>;

/// One command slot per resource; an empty slot means no primitive won that
/// resource this tick and the channel is zeroed.
struct MotorCommands {
    std::optional<double> wheels_rotation;
    std::optional<Vec2> wheels_translation;
    std::optional<double> head;
    std::optional<ArmDirective> arm;

    void apply(const ResourceCommand& command);
    bool empty() const { return !wheels_rotation && !wheels_translation && !head && !arm; }

    friend bool operator==(const MotorCommands&, const MotorCommands&) = default;
};

}  // namespace reflex::sim
