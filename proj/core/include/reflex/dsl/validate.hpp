#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reflex/dsl/ast.hpp"
#include "reflex/dsl/registry.hpp"

namespace reflex::dsl {

struct Diagnostic {
    SourceLocation where;
    std::string message;

    std::string to_string() const;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Diagnostic> diagnostics);
    std::vector<Diagnostic> diagnostics;
};

enum class StatementKind { sensor, motor, node };

struct ResolvedStatement {
    Statement statement;
    StatementKind kind = StatementKind::motor;
    std::optional<std::string> resource;  ///< motor statements only
};

/// A script whose identifiers all resolve against a registry.
struct CheckedScript {
    ScriptAst ast;
    std::vector<ResolvedStatement> statements;
    std::map<std::string, std::vector<ResolvedStatement>> nodes;

    /// Resources used anywhere in the script, sorted.
    std::vector<std::string> resources() const;
};

/// Collects every problem before failing; returns an empty list when the
/// script is valid.
std::vector<Diagnostic> diagnose(const ScriptAst& ast, const PrimitiveRegistry& registry);

/// Throws ValidationError carrying all diagnostics.
CheckedScript validate(const ScriptAst& ast, const PrimitiveRegistry& registry);

}  // namespace reflex::dsl
