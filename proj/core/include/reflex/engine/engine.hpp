#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reflex/engine/bindings.hpp"
#include "reflex/engine/memory.hpp"
#include "reflex/engine/tree.hpp"
#include "reflex/sim/world.hpp"

namespace reflex::sim {
class Simulator;
}

namespace reflex::engine {

struct ActivationSet {
    std::vector<int> active;        ///< leaf ids, ascending
    std::vector<int> active_nodes;  ///< node instance indices whose chain holds
    std::map<std::string, int> per_resource_winner;

    bool contains(int leaf) const;
};

struct Candidate {
    int leaf = 0;
    std::string resource;
    std::vector<int> priority;
};

struct Arbitration {
    std::map<std::string, int> winners;
    std::vector<std::string> warnings;
};

/// Highest priority wins each resource; equal priorities go to the earliest
/// declared leaf (lowest id) and record a warning.
Arbitration arbitrate(std::span<const Candidate> eligible);

struct TickResult {
    ActivationSet activations;
    sim::MotorCommands commands;
    Memory memory;
    std::vector<std::string> warnings;
};

struct TraceRecord {
    std::int64_t tick = 0;
    sim::WorldState world;
    ActivationSet activations;
    sim::MotorCommands commands;
};

struct Trace {
    std::vector<TraceRecord> records;
    bool truncated = false;  ///< scenario ran out before the requested ticks
};

/// Executes a compiled tree against bound primitives.
class Engine {
public:
    Engine(BehaviorTree tree, Bindings bindings);

    const BehaviorTree& tree() const { return tree_; }
    const Bindings& bindings() const { return bindings_; }

    /// Sensors update memory first, then every evaluation is read from the
    /// updated memory, resources are arbitrated and winners emit commands.
    TickResult tick(const sim::WorldState& world, Memory memory) const;

    /// Closed loop: tick, record, step the simulator by 1/hz.
    Trace run(sim::Simulator& simulator, std::int64_t ticks, double hz) const;

    /// True if the evaluation holds against memory; unknown targets or
    /// features make it false.
    bool evaluate(const dsl::EvalExpr& eval, const Memory& memory, const sim::AgentState& self,
                  const std::optional<std::string>& target) const;

    std::vector<std::string> active_labels(const ActivationSet& set) const;
    std::vector<std::string> active_node_paths(const ActivationSet& set) const;

private:
    struct Scope {
        const Memory& memory;
        const sim::AgentState& self;
        std::vector<int>& node_state;
    };
    bool chain_holds(const Leaf& leaf, Scope& scope) const;
    bool node_holds(int node, Scope& scope) const;

    BehaviorTree tree_;
    Bindings bindings_;
};

/// One JSON line per tick: tick, t, world, active leaf labels, active branches
/// and motor command values.
std::string trace_record_json(const Engine& engine, const TraceRecord& record);
void write_trace(const Engine& engine, const Trace& trace, std::ostream& out);

}  // namespace reflex::engine
