#include "reflex/engine/memory.hpp"

namespace reflex::engine {

std::optional<sim::Vec2> Memory::position(const std::string& target) const {
    auto it = targets.find(target);
    if (it == targets.end() || it->second.last_update_tick < 0) return std::nullopt;
    return it->second.position;
}

bool Memory::visible(const std::string& target) const {
    auto it = targets.find(target);
    return it != targets.end() && it->second.visible;
}

}  // namespace reflex::engine
