#include "reflex/engine/tree.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace reflex::engine {

std::vector<std::string> BehaviorTree::resources() const {
    std::set<std::string> out;
    for (const Leaf& leaf : leaves) {
        if (leaf.resource) out.insert(*leaf.resource);
    }
    return {out.begin(), out.end()};
}

namespace {

class Compiler {
public:
    explicit Compiler(const dsl::CheckedScript& script) : script_(script) {}

    BehaviorTree run() {
        for (const auto& s : script_.statements) expand(s, -1, {}, {});
        return std::move(tree_);
    }

private:
    std::string unique(std::string label) {
        const int n = ++seen_[label];
        return n == 1 ? label : label + "#" + std::to_string(n);
    }

    void expand(const dsl::ResolvedStatement& r, int parent, const std::vector<int>& ancestors,
                const std::vector<int>& priorities) {
        const dsl::Statement& s = r.statement;
        std::vector<int> priority = priorities;
        priority.push_back(s.priority);

        if (r.kind == dsl::StatementKind::node) {
            NodeInstance node;
            node.name = s.head;
            node.path = unique(parent < 0 ? s.head : tree_.nodes[parent].path + "/" + s.head);
            node.evaluation = s.evaluation;
            node.target = s.target;
            node.priority = s.priority;
            node.parent = parent;
            const int index = static_cast<int>(tree_.nodes.size());
            tree_.nodes.push_back(node);
            std::vector<int> chain = ancestors;
            chain.push_back(index);
            for (const auto& child : script_.nodes.at(s.head)) expand(child, index, chain, priority);
            return;
        }

        Leaf leaf;
        leaf.id = static_cast<int>(tree_.leaves.size());
        leaf.kind = r.kind == dsl::StatementKind::sensor ? LeafKind::sensor : LeafKind::motor;
        leaf.primitive = s.head;
        leaf.target = s.target;
        leaf.evaluation = s.evaluation;
        leaf.resource = r.resource;
        leaf.ancestors = ancestors;
        leaf.priority = std::move(priority);
        const std::string base = parent < 0 ? leaf.association_id()
                                            : tree_.nodes[parent].path + "/" + leaf.association_id();
        leaf.label = unique(base);
        tree_.leaves.push_back(std::move(leaf));
    }

    const dsl::CheckedScript& script_;
    BehaviorTree tree_;
    std::map<std::string, int> seen_;
};

}  // namespace

BehaviorTree compile(const dsl::CheckedScript& script) { return Compiler(script).run(); }

}  // namespace reflex::engine
