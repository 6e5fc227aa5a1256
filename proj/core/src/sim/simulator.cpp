#include "reflex/sim/simulator.hpp"

#include <cmath>

#include "reflex/sim/motor.hpp"

namespace reflex::sim {

WorldState initial_world(const Scenario& scenario) {
    WorldState w;
    w.time = 0.0;
    w.agent.position = scenario.agent_position;
    w.agent.body_yaw = wrap_angle(scenario.agent_body_yaw);
    w.agent.head_yaw = clamp_abs(scenario.agent_head_yaw, scenario.params.head_limit);
    w.visitor.position = scenario.visitor_waypoints.empty() ? Vec2{}
                                                            : scenario.visitor_waypoints.front().position;
    w.stand = scenario.stand;
    w.front_of_stand = scenario.front_of_stand;
    return w;
}

Simulator::Simulator(Scenario scenario, std::optional<std::uint64_t> seed)
    : scenario_(std::move(scenario)), seed_(seed.value_or(scenario_.seed)), rng_(seed_) {
    scenario_.validate();
    world_ = initial_world(scenario_);
}

void Simulator::reset() {
    rng_.seed(seed_);
    jitter_.reset();
    world_ = initial_world(scenario_);
}

bool Simulator::exhausted() const {
    if (world_.time >= scenario_.duration() - 1e-9) return true;
    if (scenario_.stop_radius && interaction_distance(world_) <= *scenario_.stop_radius) return true;
    return false;
}

void Simulator::step(const MotorCommands& commands, double dt) {
    world_.agent = integrate_agent(world_.agent, commands, scenario_.params, scenario_.corridor, dt);
    advance_visitor(dt);
    world_.time += dt;
}

void Simulator::advance_visitor(double dt) {
    const auto& path = scenario_.visitor_waypoints;
    const double noise = jitter_(rng_) * scenario_.heading_noise;
    const double t = world_.time;

    std::size_t next = 1;
    while (next < path.size() && path[next].time <= t) ++next;
    if (next >= path.size()) {
        world_.visitor.velocity = {};
        return;
    }
    const Waypoint& from = path[next - 1];
    const Waypoint& to = path[next];
    const double speed = distance(from.position, to.position) / (to.time - from.time);
    const Vec2 here = world_.visitor.position;
    const double remaining = distance(here, to.position);
    const double travel = std::min(speed * dt, remaining);
    if (travel <= 0.0) {
        world_.visitor.velocity = {};
        return;
    }
    const double heading = bearing(here, to.position) + noise;
    const Vec2 moved = scenario_.corridor.clamp(here + Vec2{std::cos(heading), std::sin(heading)} * travel);
    world_.visitor.velocity = (moved - here) * (1.0 / dt);
    world_.visitor.position = moved;
}

}  // namespace reflex::sim
