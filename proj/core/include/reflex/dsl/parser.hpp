#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "reflex/dsl/ast.hpp"

namespace reflex::dsl {

class ParseError : public std::runtime_error {
public:
    ParseError(SourceLocation where, const std::string& message);
    SourceLocation where;
};

/// Parses script source.
///
/// One statement per line. A statement is a head identifier followed by
/// clauses in any order, optionally separated by commas:
///
///     look_at targeting ball whenever seen, priority of 2
///
/// `node Name:` opens a node whose body is the following block of lines
/// indented by the same number of spaces. Tabs in indentation are rejected.
/// `#` starts a comment.
ScriptAst parse_script(std::string_view source);

}  // namespace reflex::dsl
