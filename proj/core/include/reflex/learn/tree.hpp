#pragma once

#include <map>
#include <string>
#include <vector>

#include "reflex/dsl/ast.hpp"
#include "reflex/dsl/registry.hpp"
#include "reflex/learn/activations.hpp"
#include "reflex/learn/interval.hpp"

namespace reflex::learn {

struct FlatLeaf {
    dsl::Association association;
    Interval interval;
    std::string resource;
    int order = 0;    ///< position in the association universe
    int support = 0;  ///< active samples

    friend bool operator==(const FlatLeaf&, const FlatLeaf&) = default;
};

/// Ungrouped (association, evaluation) list, the union over resources.
struct FlatTree {
    std::vector<FlatLeaf> leaves;
};

struct Group {
    std::string name;
    Interval interval;
    std::vector<FlatLeaf> members;
};

struct HierarchicalTree {
    std::vector<Group> groups;
    std::vector<FlatLeaf> ungrouped;
};

/// Keeps associations with at least `min_support` active samples and a
/// fitted interval. Partially overlapping intervals on one resource are split
/// at the midpoint of the overlap.
FlatTree build_flat_tree(const ActivationMatrix& activations, const std::map<std::string, Interval>& intervals,
                         const dsl::PrimitiveRegistry& registry, int min_support);

/// Single-link grouping of leaves whose interval endpoints all differ by at
/// most delta (infinite ends only match infinite ends). Groups take the
/// per-endpoint mean interval and are named A, B, ... by descending lower end.
HierarchicalTree factorize(const FlatTree& flat, double delta);

/// Flattens a hierarchical tree, giving every member its group's interval.
FlatTree flatten(const HierarchicalTree& tree);

struct EmitParams {
    std::string feature = "d";
    int decimals = 2;  ///< thresholds are rounded to this many decimals
    int priority = 1;
};

/// Renders the tree as a script: one node per group guarded by its interval,
/// ungrouped leaves as guarded top-level statements, preceded by the sensors
/// for every target the script reads.
dsl::ScriptAst emit_script(const HierarchicalTree& tree, const dsl::PrimitiveRegistry& registry,
                           const EmitParams& params = {});

/// Evaluation clause for an interval; nothing for the whole line.
std::optional<dsl::EvalExpr> interval_eval(const Interval& interval, const std::string& feature);

}  // namespace reflex::learn
