#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "reflex/dsl/registry.hpp"

namespace reflex::cli {

/// Environment variable naming the default registry (a built-in name or a
/// registry JSON file).
inline constexpr const char* registry_env = "REFLEX_REGISTRY";

/// `pepper`, `grasping`, or a registry file.
dsl::PrimitiveRegistry resolve_registry(const std::string& name_or_path);

/// Runs one subcommand. `args[0]` is the program name. Returns the exit code.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reflex::cli
