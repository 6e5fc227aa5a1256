#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reflex/dsl/validate.hpp"

namespace reflex::engine {

/// One instantiation of a node (a branch of the tree).
struct NodeInstance {
    std::string name;
    std::string path;  ///< e.g. "A" or "A/inner"
    std::optional<dsl::EvalExpr> evaluation;
    std::optional<std::string> target;  ///< passed to a named evaluation
    int priority = 0;
    int parent = -1;  ///< index into BehaviorTree::nodes, -1 at top level
};

enum class LeafKind { sensor, motor };

struct Leaf {
    int id = 0;  ///< declaration index
    std::string label;  ///< node path + association id, unique within the tree
    LeafKind kind = LeafKind::motor;
    std::string primitive;
    std::optional<std::string> target;
    std::optional<dsl::EvalExpr> evaluation;
    std::optional<std::string> resource;
    /// Node instances from outermost to innermost.
    std::vector<int> ancestors;
    /// Priorities from the outermost ancestor down to the leaf; compared
    /// lexicographically during arbitration.
    std::vector<int> priority;

    std::string association_id() const { return target ? primitive + "@" + *target : primitive; }
};

struct BehaviorTree {
    std::vector<Leaf> leaves;
    std::vector<NodeInstance> nodes;

    std::vector<std::string> resources() const;
};

/// Expands node statements into ancestor chains; one leaf per primitive
/// statement reachable from the top level.
BehaviorTree compile(const dsl::CheckedScript& script);

}  // namespace reflex::engine
