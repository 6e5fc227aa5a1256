#include "reflex/sim/synth.hpp"

#include <cmath>

#include "reflex/engine/engine.hpp"
#include "reflex/sim/pepper.hpp"
#include "reflex/sim/simulator.hpp"

namespace reflex::sim {

Dataset synth_demo(const dsl::CheckedScript& script, const Scenario& scenario, std::uint64_t seed, double hz) {
    if (!(hz > 0.0)) throw std::invalid_argument("tick frequency must be positive");
    const engine::Engine engine(engine::compile(script), pepper_bindings(scenario.params));
    Simulator simulator(scenario, seed);
    const auto ticks = static_cast<std::int64_t>(std::ceil(max_demo_seconds * hz));
    const engine::Trace trace = engine.run(simulator, ticks, hz);

    Dataset dataset;
    dataset.dt = 1.0 / hz;
    dataset.samples.reserve(trace.records.size());
    for (const engine::TraceRecord& r : trace.records) {
        Sample s{r.world, {}};
        for (const auto& [resource, id] : r.activations.per_resource_winner) {
            s.labels.push_back(engine.tree().leaves[id].association_id());
        }
        dataset.samples.push_back(std::move(s));
    }
    return dataset;
}

}  // namespace reflex::sim
