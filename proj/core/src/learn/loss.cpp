#include "reflex/learn/loss.hpp"

#include <stdexcept>

#include "reflex/engine/engine.hpp"
#include "reflex/sim/motor.hpp"
#include "reflex/sim/pepper.hpp"

namespace reflex::learn {

double imitation_loss(const sim::Dataset& dataset, const dsl::CheckedScript& script, const sim::Scenario& scenario) {
    if (dataset.size() < 2) throw std::invalid_argument("dataset needs at least two samples");
    const engine::Engine engine(engine::compile(script), sim::pepper_bindings(scenario.params));
    engine::Memory memory;
    double total = 0.0;
    for (std::size_t t = 0; t + 1 < dataset.size(); ++t) {
        auto result = engine.tick(dataset[t], std::move(memory));
        memory = std::move(result.memory);
        const sim::AgentState next =
            sim::integrate_agent(dataset[t].agent, result.commands, scenario.params, scenario.corridor, dataset.dt);
        const sim::AgentState& want = dataset[t + 1].agent;
        const sim::Vec2 dp = next.position - want.position;
        const double dyaw = sim::wrap_angle(next.body_yaw - want.body_yaw);
        const double dhead = next.head_yaw - want.head_yaw;
        total += sim::dot(dp, dp) + dyaw * dyaw + dhead * dhead;
    }
    return total / static_cast<double>(dataset.size() - 1);
}

}  // namespace reflex::learn
