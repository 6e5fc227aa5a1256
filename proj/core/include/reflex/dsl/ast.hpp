#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace reflex::dsl {

struct SourceLocation {
    int line = 0;
    int column = 0;
};

/// `whenever <name>`: an evaluation supplied by the registry.
struct NamedEval {
    std::string name;

    friend bool operator==(const NamedEval&, const NamedEval&) = default;
};

enum class Comparison { less, greater };

/// `whenever d > 5.1` / `whenever d < 2.7`
struct Threshold {
    std::string feature;
    Comparison op = Comparison::greater;
    double value = 0.0;

    friend bool operator==(const Threshold&, const Threshold&) = default;
};

/// `whenever 2.7 < d < 5.1`; lower < upper.
struct Band {
    std::string feature;
    double lower = 0.0;
    double upper = 0.0;

    friend bool operator==(const Band&, const Band&) = default;
};

using EvalExpr = std::variant<NamedEval, Threshold, Band>;

struct Statement {
    std::string head;  ///< primitive or node name
    std::optional<std::string> target;
    std::optional<EvalExpr> evaluation;
    int priority = 0;
    SourceLocation location;
};

struct NodeDef {
    std::string name;
    std::vector<Statement> body;
    SourceLocation location;
};

struct ScriptAst {
    std::vector<Statement> statements;  ///< top level, in source order
    std::vector<NodeDef> nodes;         ///< in declaration order, unique names

    const NodeDef* find_node(const std::string& name) const;
    bool empty() const { return statements.empty() && nodes.empty(); }
};

/// Equality that ignores source locations.
bool same_structure(const Statement& a, const Statement& b);
bool same_structure(const ScriptAst& a, const ScriptAst& b);

}  // namespace reflex::dsl
