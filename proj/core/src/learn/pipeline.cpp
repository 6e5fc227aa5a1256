#include "reflex/learn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "reflex/dsl/format.hpp"
#include "reflex/learn/inverse_model.hpp"
#include "reflex/learn/interval.hpp"
#include "reflex/sim/scenario.hpp"

namespace reflex::learn {
namespace {

using nlohmann::json;

json endpoint(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double read_endpoint(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw std::invalid_argument("bad interval endpoint '" + s + "'");
    }
    return j.get<double>();
}

json leaf_json(const FlatLeaf& leaf) {
    return {{"association", leaf.association.id()},
            {"resource", leaf.resource},
            {"lower", endpoint(leaf.interval.lower)},
            {"upper", endpoint(leaf.interval.upper)},
            {"support", leaf.support}};
}

}  // namespace

LearnConfig parse_learn_config(std::string_view json_text) {
    LearnConfig c;
    try {
        const json j = json::parse(json_text);
        if (!j.is_object()) throw std::invalid_argument("learner config must be a JSON object");
        c.lambda_idle = j.value("lambda_idle", c.lambda_idle);
        c.delta = j.value("delta", c.delta);
        c.margin = j.value("margin", c.margin);
        c.min_support = j.value("min_support", c.min_support);
        c.snap = j.value("snap", c.snap);
        if (j.contains("hz") && !j["hz"].is_null()) c.hz = j["hz"].get<double>();
        if (j.contains("sigma")) {
            for (const auto& [id, value] : j["sigma"].items()) c.sigma[id] = value.get<double>();
        }
        if (j.contains("scenario")) {
            const sim::Scenario s = sim::resolve_scenario(j["scenario"].get<std::string>());
            c.params = s.params;
            c.bounds = s.corridor;
        }
        c.emit.feature = j.value("feature", c.emit.feature);
        c.emit.decimals = j.value("decimals", c.emit.decimals);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed learner config: ") + e.what());
    }
    check_learn_config(c);
    return c;
}

void check_learn_config(const LearnConfig& c) {
    if (!(c.delta >= 0.0) || !(c.margin >= 0.0) || !(c.snap >= 0.0) || c.min_support < 1) {
        throw std::invalid_argument("learner config values out of range");
    }
    if (!std::isfinite(c.lambda_idle)) throw std::invalid_argument("lambda_idle must be finite");
    if (c.hz && !(*c.hz > 0.0)) throw std::invalid_argument("hz must be positive");
    for (const auto& [id, sigma] : c.sigma) {
        if (!(sigma > 0.0)) throw std::invalid_argument("sigma of " + id + " must be positive");
    }
    if (c.emit.decimals < 0 || c.emit.decimals > 9) throw std::invalid_argument("decimals must be in [0, 9]");
}

LearnConfig load_learn_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open learner config " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_learn_config(buffer.str());
}

LearnResult learn(const sim::Dataset& dataset, const dsl::PrimitiveRegistry& registry, const LearnConfig& config) {
    check_learn_config(config);
    if (dataset.size() < 2) throw std::invalid_argument("dataset needs at least two samples");
    dataset.check_uniform();
    if (config.hz && std::abs(1.0 / *config.hz - dataset.dt) > 1e-6) {
        throw std::invalid_argument("dataset time step does not match the configured hz");
    }
    if (config.emit.feature != "d") {
        throw std::invalid_argument("unsupported evaluation feature '" + config.emit.feature + "'");
    }

    LearnResult result;
    const InverseModelSet models = pepper_inverse_models(registry, config.params, config.bounds, dataset.dt);
    result.activations = detect_activations(dataset, registry, models, {config.lambda_idle, config.sigma});

    std::vector<double> feature(result.activations.length);
    for (std::size_t s = 0; s < feature.size(); ++s) feature[s] = sim::interaction_distance(dataset[s]);

    const IntervalFitParams fit{config.margin, config.min_support, config.snap};
    for (const auto& a : result.activations.associations()) {
        const auto active = result.activations.activation(a);
        try {
            result.intervals[a.id()] = fit_evaluation(feature, active, fit);
        } catch (const InsufficientSupport&) {
        }
    }
    result.flat = build_flat_tree(result.activations, result.intervals, registry, config.min_support);
    result.tree = factorize(result.flat, config.delta);
    result.script = emit_script(result.tree, registry, config.emit);
    result.bands = activation_bands(dataset, result.activations);
    return result;
}

std::vector<ActivationBand> activation_bands(const sim::Dataset& dataset, const ActivationMatrix& activations) {
    std::vector<ActivationBand> out;
    for (const auto& r : activations.resources) {
        std::size_t s = 0;
        while (s < r.path.size()) {
            const int state = r.path[s];
            std::size_t e = s;
            while (e + 1 < r.path.size() && r.path[e + 1] == state) ++e;
            if (state > 0) {
                out.push_back({r.resource, r.states[static_cast<std::size_t>(state - 1)].id(), dataset[s].time,
                               dataset[e].time, sim::interaction_distance(dataset[s]),
                               sim::interaction_distance(dataset[e])});
            }
            s = e + 1;
        }
    }
    return out;
}

std::string report_json(const LearnResult& result) {
    json bands = json::object();
    for (const auto& r : result.activations.resources) bands[r.resource] = json::array();
    for (const auto& b : result.bands) {
        bands[b.resource].push_back({{"association", b.association},
                                     {"t_start", b.t_start},
                                     {"t_end", b.t_end},
                                     {"d_start", b.d_start},
                                     {"d_end", b.d_end}});
    }
    json flat = json::array();
    for (const auto& leaf : result.flat.leaves) flat.push_back(leaf_json(leaf));
    json groups = json::array();
    for (const auto& g : result.tree.groups) {
        json members = json::array();
        for (const auto& m : g.members) members.push_back(m.association.id());
        groups.push_back({{"name", g.name},
                          {"lower", endpoint(g.interval.lower)},
                          {"upper", endpoint(g.interval.upper)},
                          {"members", members}});
    }
    json ungrouped = json::array();
    for (const auto& leaf : result.tree.ungrouped) ungrouped.push_back(leaf_json(leaf));
    const json j{{"bands", bands},
                 {"flat", flat},
                 {"groups", groups},
                 {"ungrouped", ungrouped},
                 {"script", dsl::format_script(result.script)}};
    return j.dump(2) + "\n";
}

Report parse_report(std::string_view json_text) {
    Report report;
    try {
        const json j = json::parse(json_text);
        for (const auto& [resource, list] : j.at("bands").items()) {
            for (const auto& b : list) {
                report.bands.push_back({resource, b.at("association").get<std::string>(), b.at("t_start").get<double>(),
                                        b.at("t_end").get<double>(), b.at("d_start").get<double>(),
                                        b.at("d_end").get<double>()});
            }
        }
        if (j.contains("groups")) {
            for (const auto& g : j["groups"]) {
                report.groups.push_back(
                    {g.at("name").get<std::string>(), read_endpoint(g.at("lower")), read_endpoint(g.at("upper"))});
            }
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed report: ") + e.what());
    }
    return report;
}

std::string render_bands_svg(const Report& report) {
    std::vector<std::string> resources;
    double d_min = std::numeric_limits<double>::infinity();
    double d_max = -std::numeric_limits<double>::infinity();
    for (const auto& b : report.bands) {
        if (std::find(resources.begin(), resources.end(), b.resource) == resources.end()) {
            resources.push_back(b.resource);
        }
        d_min = std::min({d_min, b.d_start, b.d_end});
        d_max = std::max({d_max, b.d_start, b.d_end});
    }
    if (report.bands.empty()) {
        d_min = 0.0;
        d_max = 1.0;
    }
    d_min = std::floor(d_min);
    d_max = std::max(std::ceil(d_max), d_min + 1.0);

    const double left = 150.0, right = 30.0, top = 30.0, row = 60.0, width = 900.0;
    const double plot = width - left - right;
    const double height = top + row * static_cast<double>(std::max<std::size_t>(resources.size(), 1)) + 50.0;
    auto x_of = [&](double d) { return left + plot * (d - d_min) / (d_max - d_min); };

    std::vector<std::string> associations;
    for (const auto& b : report.bands) {
        if (std::find(associations.begin(), associations.end(), b.association) == associations.end()) {
            associations.push_back(b.association);
        }
    }
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    auto colour = [&](const std::string& a) {
        const auto i = std::find(associations.begin(), associations.end(), a) - associations.begin();
        return palette[static_cast<std::size_t>(i) % std::size(palette)];
    };

    std::ostringstream svg;
    svg << std::fixed << std::setprecision(1);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const double axis_y = top + row * static_cast<double>(resources.size());
    for (std::size_t i = 0; i < resources.size(); ++i) {
        const double y = top + row * static_cast<double>(i);
        svg << "<text x=\"10\" y=\"" << y + row / 2 + 4 << "\">" << resources[i] << "</text>\n";
        svg << "<line x1=\"" << left << "\" x2=\"" << width - right << "\" y1=\"" << y + row << "\" y2=\"" << y + row
            << "\" stroke=\"#ddd\"/>\n";
        std::vector<std::string> lanes;
        for (const auto& b : report.bands) {
            if (b.resource != resources[i]) continue;
            auto lane = std::find(lanes.begin(), lanes.end(), b.association) - lanes.begin();
            if (static_cast<std::size_t>(lane) == lanes.size()) lanes.push_back(b.association);
            const double bar_y = y + 6 + 14.0 * static_cast<double>(lane % 3);
            const double x0 = x_of(std::min(b.d_start, b.d_end));
            const double x1 = std::max(x_of(std::max(b.d_start, b.d_end)), x0 + 1.0);
            svg << "<rect x=\"" << x0 << "\" y=\"" << bar_y << "\" width=\"" << x1 - x0
                << "\" height=\"12\" fill=\"" << colour(b.association) << "\" fill-opacity=\"0.8\"><title>"
                << b.association << "</title></rect>\n";
        }
        for (std::size_t l = 0; l < lanes.size(); ++l) {
            svg << "<text x=\"" << left - 4 << "\" y=\"" << y + 16 + 14.0 * static_cast<double>(l % 3)
                << "\" text-anchor=\"end\" font-size=\"9\" fill=\"" << colour(lanes[l]) << "\">" << lanes[l]
                << "</text>\n";
        }
    }
    for (const auto& g : report.groups) {
        const double lo = std::isinf(g.lower) ? d_min : std::max(g.lower, d_min);
        const double hi = std::isinf(g.upper) ? d_max : std::min(g.upper, d_max);
        if (!(lo < hi)) continue;
        svg << "<rect x=\"" << x_of(lo) << "\" y=\"" << top - 4 << "\" width=\"" << x_of(hi) - x_of(lo)
            << "\" height=\"" << axis_y - top + 8 << "\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
        svg << "<text x=\"" << x_of(lo) + 4 << "\" y=\"" << top - 8 << "\">" << g.name << "</text>\n";
    }
    svg << "<line x1=\"" << left << "\" x2=\"" << width - right << "\" y1=\"" << axis_y << "\" y2=\"" << axis_y
        << "\" stroke=\"black\"/>\n";
    for (double d = d_min; d <= d_max + 1e-9; d += 1.0) {
        svg << "<line x1=\"" << x_of(d) << "\" x2=\"" << x_of(d) << "\" y1=\"" << axis_y << "\" y2=\"" << axis_y + 5
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << x_of(d) << "\" y=\"" << axis_y + 18 << "\" text-anchor=\"middle\">" << d << "</text>\n";
    }
    svg << "<text x=\"" << left + plot / 2 << "\" y=\"" << axis_y + 36
        << "\" text-anchor=\"middle\">visitor-stand distance d (m)</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace reflex::learn
