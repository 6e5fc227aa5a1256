#pragma once

#include <string>

#include "reflex/dsl/ast.hpp"

namespace reflex::dsl {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

std::string format_eval(const EvalExpr& eval);
std::string format_statement(const Statement& statement);

/// Canonical text: top-level statements that are not node instantiations
/// first, then node definitions (4-space bodies), then node instantiations.
/// Priority 0 is omitted. An empty script formats to the empty string.
std::string format_script(const ScriptAst& ast);

}  // namespace reflex::dsl
