#include "reflex/learn/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace reflex::learn {
namespace {

bool endpoints_match(double a, double b, double delta) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= delta + 1e-12;
}

bool leaves_match(const FlatLeaf& a, const FlatLeaf& b, double delta) {
    return endpoints_match(a.interval.lower, b.interval.lower, delta) &&
           endpoints_match(a.interval.upper, b.interval.upper, delta);
}

double mean_endpoint(const std::vector<FlatLeaf>& members, double Interval::*end) {
    const double first = members.front().interval.*end;
    if (std::isinf(first)) return first;
    double sum = 0.0;
    for (const auto& m : members) sum += m.interval.*end;
    return sum / static_cast<double>(members.size());
}

bool leaf_order(const FlatLeaf& a, const FlatLeaf& b) {
    if (a.order != b.order) return a.order < b.order;
    return a.association < b.association;
}

std::string group_name(std::size_t index) {
    const char letter = static_cast<char>('A' + index % 26);
    if (index < 26) return std::string(1, letter);
    return std::string(1, letter) + std::to_string(index / 26);
}

double round_to(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

}  // namespace

FlatTree build_flat_tree(const ActivationMatrix& activations, const std::map<std::string, Interval>& intervals,
                         const dsl::PrimitiveRegistry& registry, int min_support) {
    const auto universe = registry.association_universe();
    FlatTree flat;
    for (const auto& r : activations.resources) {
        for (std::size_t k = 0; k < r.states.size(); ++k) {
            const auto& a = r.states[k];
            const auto it = intervals.find(a.id());
            if (it == intervals.end()) continue;
            const int state = static_cast<int>(k) + 1;
            const auto support = static_cast<int>(std::count(r.path.begin(), r.path.end(), state));
            if (support < min_support) continue;
            const auto pos = std::find(universe.begin(), universe.end(), a);
            flat.leaves.push_back({a, it->second, r.resource, static_cast<int>(pos - universe.begin()), support});
        }
    }

    // Same-resource intervals that partially overlap meet at the overlap midpoint.
    for (std::size_t i = 0; i < flat.leaves.size(); ++i) {
        for (std::size_t j = 0; j < flat.leaves.size(); ++j) {
            if (i == j || flat.leaves[i].resource != flat.leaves[j].resource) continue;
            Interval& a = flat.leaves[i].interval;
            Interval& b = flat.leaves[j].interval;
            if (a.lower < b.lower && b.lower < a.upper && a.upper < b.upper) {
                const double mid = 0.5 * (b.lower + a.upper);
                a.upper = mid;
                b.lower = mid;
            }
        }
    }
    return flat;
}

HierarchicalTree factorize(const FlatTree& flat, double delta) {
    std::vector<FlatLeaf> leaves = flat.leaves;
    std::sort(leaves.begin(), leaves.end(), leaf_order);

    std::vector<std::size_t> parent(leaves.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        for (std::size_t j = i + 1; j < leaves.size(); ++j) {
            if (leaves_match(leaves[i], leaves[j], delta)) parent[find(j)] = find(i);
        }
    }

    std::map<std::size_t, std::vector<FlatLeaf>> components;
    for (std::size_t i = 0; i < leaves.size(); ++i) components[find(i)].push_back(leaves[i]);

    HierarchicalTree tree;
    for (auto& [root, members] : components) {
        if (members.size() < 2) {
            tree.ungrouped.push_back(members.front());
            continue;
        }
        Group g;
        g.interval = {mean_endpoint(members, &Interval::lower), mean_endpoint(members, &Interval::upper)};
        g.members = std::move(members);
        tree.groups.push_back(std::move(g));
    }
    std::sort(tree.groups.begin(), tree.groups.end(), [](const Group& a, const Group& b) {
        if (a.interval.lower != b.interval.lower) return a.interval.lower > b.interval.lower;
        if (a.interval.upper != b.interval.upper) return a.interval.upper > b.interval.upper;
        return leaf_order(a.members.front(), b.members.front());
    });
    for (std::size_t i = 0; i < tree.groups.size(); ++i) tree.groups[i].name = group_name(i);
    std::sort(tree.ungrouped.begin(), tree.ungrouped.end(), leaf_order);
    return tree;
}

FlatTree flatten(const HierarchicalTree& tree) {
    FlatTree flat;
    for (const auto& g : tree.groups) {
        for (FlatLeaf leaf : g.members) {
            leaf.interval = g.interval;
            flat.leaves.push_back(leaf);
        }
    }
    flat.leaves.insert(flat.leaves.end(), tree.ungrouped.begin(), tree.ungrouped.end());
    std::sort(flat.leaves.begin(), flat.leaves.end(), leaf_order);
    return flat;
}

std::optional<dsl::EvalExpr> interval_eval(const Interval& interval, const std::string& feature) {
    if (interval.lower_bounded() && interval.upper_bounded()) {
        return dsl::Band{feature, interval.lower, interval.upper};
    }
    if (interval.lower_bounded()) return dsl::Threshold{feature, dsl::Comparison::greater, interval.lower};
    if (interval.upper_bounded()) return dsl::Threshold{feature, dsl::Comparison::less, interval.upper};
    return std::nullopt;
}

dsl::ScriptAst emit_script(const HierarchicalTree& tree, const dsl::PrimitiveRegistry& registry,
                           const EmitParams& params) {
    auto rounded = [&](const Interval& in) {
        Interval out = in;
        if (out.lower_bounded()) out.lower = round_to(out.lower, params.decimals);
        if (out.upper_bounded()) out.upper = round_to(out.upper, params.decimals);
        return out.lower < out.upper ? out : in;
    };
    auto motor = [&](const FlatLeaf& leaf, const std::optional<dsl::EvalExpr>& guard) {
        dsl::Statement s;
        s.head = leaf.association.primitive;
        s.target = leaf.association.target;
        s.evaluation = guard;
        s.priority = params.priority;
        return s;
    };

    std::set<std::string> targets;
    bool guarded = false;
    dsl::ScriptAst ast;
    std::vector<dsl::Statement> body;
    for (const auto& g : tree.groups) {
        dsl::NodeDef node;
        node.name = g.name;
        for (const auto& m : g.members) {
            node.body.push_back(motor(m, std::nullopt));
            if (m.association.target) targets.insert(*m.association.target);
        }
        ast.nodes.push_back(std::move(node));

        dsl::Statement use;
        use.head = g.name;
        use.evaluation = interval_eval(rounded(g.interval), params.feature);
        use.priority = params.priority;
        guarded = guarded || use.evaluation.has_value();
        body.push_back(std::move(use));
    }
    for (const auto& leaf : tree.ungrouped) {
        auto guard = interval_eval(rounded(leaf.interval), params.feature);
        guarded = guarded || guard.has_value();
        body.push_back(motor(leaf, guard));
        if (leaf.association.target) targets.insert(*leaf.association.target);
    }
    if (guarded) {
        if (const auto* f = registry.find_feature(params.feature)) targets.insert(f->targets.begin(), f->targets.end());
    }

    for (const auto& sensor : registry.sensors) {
        const bool needed = std::any_of(sensor.targets.begin(), sensor.targets.end(),
                                        [&](const std::string& t) { return targets.count(t) > 0; });
        if (!needed) continue;
        dsl::Statement s;
        s.head = sensor.name;
        s.priority = params.priority;
        ast.statements.push_back(std::move(s));
    }
    ast.statements.insert(ast.statements.end(), body.begin(), body.end());
    return ast;
}

}  // namespace reflex::learn
