#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "reflex/sim/scenario.hpp"
#include "reflex/sim/world.hpp"

namespace reflex::sim {

WorldState initial_world(const Scenario& scenario);

/// Kinematic corridor world. One owner steps it; independent instances share
/// no state.
class Simulator {
public:
    explicit Simulator(Scenario scenario, std::optional<std::uint64_t> seed = std::nullopt);

    const WorldState& state() const { return world_; }
    const Scenario& scenario() const { return scenario_; }
    std::uint64_t seed() const { return seed_; }

    /// Advances the agent under `commands` and the visitor along its waypoint
    /// path by dt seconds.
    void step(const MotorCommands& commands, double dt);

    /// True once the visitor path has ended or the visitor reached the stand.
    bool exhausted() const;

    void reset();

private:
    void advance_visitor(double dt);

    Scenario scenario_;
    std::uint64_t seed_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> jitter_{0.0, 1.0};
    WorldState world_;
};

}  // namespace reflex::sim
