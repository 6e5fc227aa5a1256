#include "reflex/sim/world.hpp"

#include <algorithm>
#include <stdexcept>

namespace reflex::sim {

std::string_view to_string(ArmMode mode) {
    switch (mode) {
    case ArmMode::idle: return "idle";
    case ArmMode::pointing: return "pointing";
    case ArmMode::waving: return "waving";
    }
    return "idle";
}

ArmMode arm_mode_from_string(std::string_view text) {
    if (text == "idle") return ArmMode::idle;
    if (text == "pointing") return ArmMode::pointing;
    if (text == "waving") return ArmMode::waving;
    throw std::invalid_argument("unknown arm mode '" + std::string(text) + "'");
}

Vec2 Bounds::clamp(Vec2 p) const {
    return {std::clamp(p.x, 0.0, length), std::clamp(p.y, 0.0, width)};
}

bool Bounds::contains(Vec2 p, double tolerance) const {
    return p.x >= -tolerance && p.x <= length + tolerance && p.y >= -tolerance &&
           p.y <= width + tolerance;
}

void MotorCommands::apply(const ResourceCommand& command) {
    std::visit(
        [this](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, YawRateCommand>) {
                wheels_rotation = c.rate;
            } else if constexpr (std::is_same_v<T, VelocityCommand>) {
                wheels_translation = c.velocity;
            } else if constexpr (std::is_same_v<T, HeadRateCommand>) {
                head = c.rate;
            } else {
                arm = c;
            }
        },
        command);
}

}  // namespace reflex::sim
