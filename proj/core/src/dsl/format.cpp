#include "reflex/dsl/format.hpp"

#include <charconv>
#include <sstream>

namespace reflex::dsl {

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;  // drop the sign of -0
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    std::string text(buffer, ptr);
    if (text.find_first_of(".e") == std::string::npos) text += ".0";
    return text;
}

std::string format_eval(const EvalExpr& eval) {
    return std::visit(
        [](const auto& e) -> std::string {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, NamedEval>) {
                return e.name;
            } else if constexpr (std::is_same_v<T, Threshold>) {
                return e.feature + (e.op == Comparison::less ? " < " : " > ") + format_number(e.value);
            } else {
                return format_number(e.lower) + " < " + e.feature + " < " + format_number(e.upper);
            }
        },
        eval);
}

std::string format_statement(const Statement& s) {
    std::string out = s.head;
    if (s.target) out += " targeting " + *s.target;
    if (s.evaluation) out += " whenever " + format_eval(*s.evaluation);
    if (s.priority != 0) out += ", priority of " + std::to_string(s.priority);
    return out;
}

std::string format_script(const ScriptAst& ast) {
    std::ostringstream out;
    bool first_block = true;
    for (const NodeDef& node : ast.nodes) {
        if (!first_block) out << '\n';
        first_block = false;
        out << "node " << node.name << ":\n";
        for (const Statement& s : node.body) out << "    " << format_statement(s) << '\n';
    }
    if (!ast.statements.empty()) {
        if (!first_block) out << '\n';
        for (const Statement& s : ast.statements) out << format_statement(s) << '\n';
    }
    return out.str();
}

}  // namespace reflex::dsl
