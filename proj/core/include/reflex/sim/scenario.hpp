#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reflex/sim/world.hpp"

namespace reflex::sim {

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Waypoint {
    double time = 0.0;  ///< s
    Vec2 position;
};

/// Corridor layout, visitor path and agent start for one run.
struct Scenario {
    std::string name = "corridor";
    Bounds corridor;
    Vec2 stand;
    Vec2 front_of_stand;
    Vec2 agent_position;
    double agent_body_yaw = 0.0;
    double agent_head_yaw = 0.0;
    std::vector<Waypoint> visitor_waypoints;
    std::uint64_t seed = 0;
    double heading_noise = 0.0;  ///< std of the visitor heading jitter, rad
    /// Run ends once the visitor is this close to the stand.
    std::optional<double> stop_radius;
    AgentParams params;

    /// Throws ScenarioError when an invariant does not hold.
    void validate() const;
    double duration() const;
};

Scenario parse_scenario(std::string_view json_text);
std::string serialize_scenario(const Scenario& scenario);
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// The 5 m x 3 m corridor: stand at the far end against the side wall,
/// visitor walking straight down the corridor and diverging toward the stand.
Scenario corridor_scenario();
/// Visitor walks the length of the corridor without visiting the stand.
Scenario pass_by_scenario();
/// Visitor passes the stand, comes back to it, then leaves.
Scenario approach_leave_return_scenario();

/// Looks up one of the built-in scenarios by name, or loads a scenario file.
Scenario resolve_scenario(std::string_view name_or_path);

}  // namespace reflex::sim
