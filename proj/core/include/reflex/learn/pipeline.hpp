#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reflex/dsl/ast.hpp"
#include "reflex/dsl/registry.hpp"
#include "reflex/learn/activations.hpp"
#include "reflex/learn/tree.hpp"
#include "reflex/sim/dataset.hpp"
#include "reflex/sim/world.hpp"

namespace reflex::learn {

struct LearnConfig {
    double lambda_idle = -0.5;
    double delta = 0.3;
    double margin = 0.05;
    int min_support = 25;
    double snap = 0.1;
    std::optional<double> hz;
    std::map<std::string, double> sigma;
    sim::AgentParams params;
    sim::Bounds bounds;
    EmitParams emit;
};

LearnConfig parse_learn_config(std::string_view json_text);
/// Throws std::invalid_argument when a value is out of range.
void check_learn_config(const LearnConfig& config);
LearnConfig load_learn_config(const std::filesystem::path& path);

/// Contiguous run of one association on a resource.
struct ActivationBand {
    std::string resource;
    std::string association;
    double t_start = 0.0;
    double t_end = 0.0;
    double d_start = 0.0;
    double d_end = 0.0;
};

struct LearnResult {
    ActivationMatrix activations;
    std::map<std::string, Interval> intervals;
    FlatTree flat;
    HierarchicalTree tree;
    dsl::ScriptAst script;
    std::vector<ActivationBand> bands;
};

/// Decode activations, fit evaluations, build, factorize and emit.
LearnResult learn(const sim::Dataset& dataset, const dsl::PrimitiveRegistry& registry, const LearnConfig& config);

std::vector<ActivationBand> activation_bands(const sim::Dataset& dataset, const ActivationMatrix& activations);

/// JSON sidecar: activation bands per resource, flat leaves and groups.
std::string report_json(const LearnResult& result);

struct Report {
    std::vector<ActivationBand> bands;
    struct GroupBox {
        std::string name;
        double lower = 0.0;
        double upper = 0.0;
    };
    std::vector<GroupBox> groups;
};

Report parse_report(std::string_view json_text);

/// Activation bands per resource over the interaction distance, distance
/// decreasing from right to left, with dotted boxes around groups.
std::string render_bands_svg(const Report& report);

}  // namespace reflex::learn
