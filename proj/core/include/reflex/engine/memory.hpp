#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "reflex/sim/geometry.hpp"

namespace reflex::engine {

struct TargetRecord {
    sim::Vec2 position;
    std::int64_t last_update_tick = -1;
    bool visible = false;
};

/// Persistent target store consulted by evaluations and motor primitives.
/// Poses change only through sensor updates and persist after a target is
/// lost.
struct Memory {
    std::map<std::string, TargetRecord> targets;
    std::int64_t tick_count = 0;

    /// Last known position, or nothing if the target was never seen.
    std::optional<sim::Vec2> position(const std::string& target) const;
    bool visible(const std::string& target) const;
};

}  // namespace reflex::engine
