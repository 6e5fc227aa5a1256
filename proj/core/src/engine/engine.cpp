#include "reflex/engine/engine.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "detail/json_codec.hpp"
#include "reflex/sim/simulator.hpp"

namespace reflex::engine {

bool ActivationSet::contains(int leaf) const {
    return std::binary_search(active.begin(), active.end(), leaf);
}

Arbitration arbitrate(std::span<const Candidate> eligible) {
    Arbitration result;
    std::map<std::string, const Candidate*> best;
    for (const Candidate& c : eligible) {
        auto [it, inserted] = best.try_emplace(c.resource, &c);
        if (inserted) continue;
        const Candidate* current = it->second;
        if (c.priority > current->priority || (c.priority == current->priority && c.leaf < current->leaf)) {
            it->second = &c;
        }
    }
    for (const auto& [resource, winner] : best) {
        result.winners[resource] = winner->leaf;
        for (const Candidate& c : eligible) {
            if (&c != winner && c.resource == resource && c.priority == winner->priority) {
                result.warnings.push_back("equal priority on resource '" + resource + "': leaf " +
                                          std::to_string(winner->leaf) + " wins over leaf " +
                                          std::to_string(c.leaf) + " by declaration order");
            }
        }
    }
    return result;
}

Engine::Engine(BehaviorTree tree, Bindings bindings) : tree_(std::move(tree)), bindings_(std::move(bindings)) {
    std::string missing;
    auto need = [&](bool ok, const std::string& what) {
        if (!ok) missing += (missing.empty() ? "" : ", ") + what;
    };
    auto check_eval = [&](const std::optional<dsl::EvalExpr>& e) {
        if (!e) return;
        if (const auto* named = std::get_if<dsl::NamedEval>(&*e)) {
            need(bindings_.evaluations.count(named->name) > 0, "evaluation " + named->name);
        } else if (const auto* t = std::get_if<dsl::Threshold>(&*e)) {
            need(bindings_.features.count(t->feature) > 0, "feature " + t->feature);
        } else if (const auto* b = std::get_if<dsl::Band>(&*e)) {
            need(bindings_.features.count(b->feature) > 0, "feature " + b->feature);
        }
    };
    for (const Leaf& leaf : tree_.leaves) {
        if (leaf.kind == LeafKind::sensor) {
            need(bindings_.sensors.count(leaf.primitive) > 0, "sensor " + leaf.primitive);
        } else {
            need(bindings_.motors.count(leaf.primitive) > 0, "motor " + leaf.primitive);
        }
        check_eval(leaf.evaluation);
    }
    for (const NodeInstance& node : tree_.nodes) check_eval(node.evaluation);
    if (!missing.empty()) throw std::invalid_argument("no runtime binding for: " + missing);
}

bool Engine::evaluate(const dsl::EvalExpr& eval, const Memory& memory, const sim::AgentState& self,
                      const std::optional<std::string>& target) const {
    return std::visit(
        [&](const auto& e) -> bool {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, dsl::NamedEval>) {
                return bindings_.evaluations.at(e.name)(memory, self, target);
            } else if constexpr (std::is_same_v<T, dsl::Threshold>) {
                const auto value = bindings_.features.at(e.feature)(memory);
                if (!value) return false;
                return e.op == dsl::Comparison::less ? *value < e.value : *value > e.value;
            } else {
                const auto value = bindings_.features.at(e.feature)(memory);
                return value && e.lower < *value && *value < e.upper;
            }
        },
        eval);
}

// node_state caches per-tick node results: -1 unknown, 0 false, 1 true.
bool Engine::node_holds(int node, Scope& scope) const {
    int& state = scope.node_state[node];
    if (state >= 0) return state == 1;
    const NodeInstance& n = tree_.nodes[node];
    bool ok = n.parent < 0 || node_holds(n.parent, scope);
    if (ok && n.evaluation) ok = evaluate(*n.evaluation, scope.memory, scope.self, n.target);
    state = ok ? 1 : 0;
    return ok;
}

bool Engine::chain_holds(const Leaf& leaf, Scope& scope) const {
    if (!leaf.ancestors.empty() && !node_holds(leaf.ancestors.back(), scope)) return false;
    return !leaf.evaluation || evaluate(*leaf.evaluation, scope.memory, scope.self, leaf.target);
}

TickResult Engine::tick(const sim::WorldState& world, Memory memory) const {
    TickResult result;

    // Sensors: guards read the memory as it was before this tick's updates.
    std::vector<int> node_state(tree_.nodes.size(), -1);
    std::vector<TargetObservation> observations;
    {
        Scope before{memory, world.agent, node_state};
        for (const Leaf& leaf : tree_.leaves) {
            if (leaf.kind != LeafKind::sensor || !chain_holds(leaf, before)) continue;
            result.activations.active.push_back(leaf.id);
            auto seen = bindings_.sensors.at(leaf.primitive)(world);
            observations.insert(observations.end(), seen.begin(), seen.end());
        }
    }
    for (const TargetObservation& o : observations) {
        TargetRecord& record = memory.targets[o.target];
        record.visible = o.visible;
        if (o.visible) {
            record.position = o.position;
            record.last_update_tick = memory.tick_count;
        }
    }

    std::fill(node_state.begin(), node_state.end(), -1);
    Scope scope{memory, world.agent, node_state};
    std::vector<Candidate> eligible;
    for (const Leaf& leaf : tree_.leaves) {
        if (leaf.kind != LeafKind::motor) continue;
        if (leaf.target && !memory.position(*leaf.target)) continue;
        if (!chain_holds(leaf, scope)) continue;
        eligible.push_back({leaf.id, *leaf.resource, leaf.priority});
    }
    Arbitration arbitration = arbitrate(eligible);
    for (const auto& [resource, id] : arbitration.winners) {
        const Leaf& leaf = tree_.leaves[id];
        const std::optional<sim::Vec2> target =
            leaf.target ? memory.position(*leaf.target) : std::optional<sim::Vec2>{};
        result.commands.apply(bindings_.motors.at(leaf.primitive)(target, world));
        result.activations.active.push_back(id);
    }
    std::sort(result.activations.active.begin(), result.activations.active.end());
    for (int n = 0; n < static_cast<int>(tree_.nodes.size()); ++n) {
        if (node_holds(n, scope)) result.activations.active_nodes.push_back(n);
    }
    result.activations.per_resource_winner = std::move(arbitration.winners);
    result.warnings = std::move(arbitration.warnings);
    ++memory.tick_count;
    result.memory = std::move(memory);
    return result;
}

Trace Engine::run(sim::Simulator& simulator, std::int64_t ticks, double hz) const {
    if (!(hz > 0.0)) throw std::invalid_argument("tick frequency must be positive");
    const double dt = 1.0 / hz;
    Trace trace;
    Memory memory;
    for (std::int64_t k = 0; k < ticks; ++k) {
        if (simulator.exhausted()) {
            trace.truncated = true;
            break;
        }
        TickResult r = tick(simulator.state(), std::move(memory));
        trace.records.push_back({k, simulator.state(), std::move(r.activations), r.commands});
        memory = std::move(r.memory);
        simulator.step(r.commands, dt);
    }
    return trace;
}

std::vector<std::string> Engine::active_labels(const ActivationSet& set) const {
    std::vector<std::string> out;
    for (int id : set.active) out.push_back(tree_.leaves[id].label);
    return out;
}

std::vector<std::string> Engine::active_node_paths(const ActivationSet& set) const {
    std::vector<std::string> out;
    for (int n : set.active_nodes) out.push_back(tree_.nodes[n].path);
    return out;
}

std::string trace_record_json(const Engine& engine, const TraceRecord& record) {
    nlohmann::json j{
        {"tick", record.tick},
        {"t", record.world.time},
        {"world", detail::world_json(record.world)},
        {"active", engine.active_labels(record.activations)},
        {"branches", engine.active_node_paths(record.activations)},
        {"commands", detail::commands_json(record.commands)},
    };
    return j.dump();
}

void write_trace(const Engine& engine, const Trace& trace, std::ostream& out) {
    for (const TraceRecord& r : trace.records) out << trace_record_json(engine, r) << '\n';
}

}  // namespace reflex::engine
