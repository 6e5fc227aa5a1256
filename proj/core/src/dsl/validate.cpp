#include "reflex/dsl/validate.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace reflex::dsl {

std::string Diagnostic::to_string() const {
    return std::to_string(where.line) + ":" + std::to_string(where.column) + ": " + message;
}

namespace {

std::string join(const std::vector<Diagnostic>& diagnostics) {
    std::string out;
    for (const auto& d : diagnostics) {
        if (!out.empty()) out += "\n";
        out += d.to_string();
    }
    return out;
}

struct Checker {
    const ScriptAst& ast;
    const PrimitiveRegistry& registry;
    std::vector<Diagnostic> out;

    void error(const Statement& s, std::string message) { out.push_back({s.location, std::move(message)}); }

    void check_eval(const Statement& s) {
        if (!s.evaluation) return;
        std::visit(
            [&](const auto& e) {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, NamedEval>) {
                    if (!registry.has_evaluation(e.name)) error(s, "unknown evaluation '" + e.name + "'");
                } else {
                    if (!registry.find_feature(e.feature)) error(s, "unknown feature '" + e.feature + "'");
                }
            },
            *s.evaluation);
    }

    ResolvedStatement resolve(const Statement& s) {
        ResolvedStatement r{s, StatementKind::motor, std::nullopt};
        check_eval(s);
        if (const MotorSpec* m = registry.find_motor(s.head)) {
            r.resource = m->resource;
            if (m->targeting && !s.target) error(s, "missing target: '" + s.head + "' requires 'targeting <target>'");
            if (!m->targeting && s.target) error(s, "'" + s.head + "' does not take a target");
        } else if (registry.find_sensor(s.head)) {
            r.kind = StatementKind::sensor;
            if (s.target) error(s, "sensor primitive '" + s.head + "' does not take a target");
        } else if (ast.find_node(s.head)) {
            r.kind = StatementKind::node;
            // A target on a node statement only feeds its named evaluation.
            if (s.target && !(s.evaluation && std::holds_alternative<NamedEval>(*s.evaluation))) {
                error(s, "node '" + s.head + "' takes a target only for a named evaluation");
            }
        } else {
            error(s, "unknown primitive or node '" + s.head + "'");
        }
        if (s.target && !registry.has_target(*s.target)) error(s, "unknown target '" + *s.target + "'");
        return r;
    }

    void check_cycles() {
        // 0 = unvisited, 1 = on stack, 2 = done
        std::map<std::string, int> state;
        std::function<void(const NodeDef&)> visit = [&](const NodeDef& node) {
            state[node.name] = 1;
            for (const Statement& s : node.body) {
                const NodeDef* child = ast.find_node(s.head);
                if (!child) continue;
                if (state[child->name] == 1) {
                    error(s, "recursive inclusion of node '" + child->name + "'");
                } else if (state[child->name] == 0) {
                    visit(*child);
                }
            }
            state[node.name] = 2;
        };
        for (const NodeDef& node : ast.nodes) {
            if (state[node.name] == 0) visit(node);
        }
    }

    void check_names() {
        for (const NodeDef& node : ast.nodes) {
            if (registry.find_motor(node.name) || registry.find_sensor(node.name)) {
                out.push_back({node.location, "node '" + node.name + "' shadows a primitive"});
            }
        }
    }
};

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> d)
    : std::runtime_error(join(d)), diagnostics(std::move(d)) {}

std::vector<std::string> CheckedScript::resources() const {
    std::set<std::string> out;
    for (const auto& s : statements) {
        if (s.resource) out.insert(*s.resource);
    }
    for (const auto& [name, body] : nodes) {
        for (const auto& s : body) {
            if (s.resource) out.insert(*s.resource);
        }
    }
    return {out.begin(), out.end()};
}

CheckedScript validate(const ScriptAst& ast, const PrimitiveRegistry& registry) {
    Checker c{ast, registry, {}};
    c.check_names();
    CheckedScript checked;
    checked.ast = ast;
    for (const Statement& s : ast.statements) checked.statements.push_back(c.resolve(s));
    for (const NodeDef& node : ast.nodes) {
        auto& body = checked.nodes[node.name];
        for (const Statement& s : node.body) body.push_back(c.resolve(s));
    }
    c.check_cycles();
    if (!c.out.empty()) throw ValidationError(std::move(c.out));
    return checked;
}

std::vector<Diagnostic> diagnose(const ScriptAst& ast, const PrimitiveRegistry& registry) {
    try {
        validate(ast, registry);
    } catch (const ValidationError& e) {
        return e.diagnostics;
    }
    return {};
}

}  // namespace reflex::dsl
