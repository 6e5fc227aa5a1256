#include "reflex/dsl/ast.hpp"

#include <algorithm>

namespace reflex::dsl {

const NodeDef* ScriptAst::find_node(const std::string& name) const {
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const NodeDef& n) { return n.name == name; });
    return it == nodes.end() ? nullptr : &*it;
}

bool same_structure(const Statement& a, const Statement& b) {
    return a.head == b.head && a.target == b.target && a.evaluation == b.evaluation &&
           a.priority == b.priority;
}

namespace {

bool same_statements(const std::vector<Statement>& a, const std::vector<Statement>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                      [](const Statement& x, const Statement& y) { return same_structure(x, y); });
}

}  // namespace

bool same_structure(const ScriptAst& a, const ScriptAst& b) {
    if (!same_statements(a.statements, b.statements)) return false;
    return std::equal(a.nodes.begin(), a.nodes.end(), b.nodes.begin(), b.nodes.end(),
                      [](const NodeDef& x, const NodeDef& y) {
                          return x.name == y.name && same_statements(x.body, y.body);
                      });
}

}  // namespace reflex::dsl
