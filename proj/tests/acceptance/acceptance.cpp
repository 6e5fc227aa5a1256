// Acceptance suite: one PASS/FAIL line per criterion. Every pipeline step runs
// through the command line entry point.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "random_scripts.hpp"
#include "reflex/dsl/format.hpp"
#include "reflex/dsl/parser.hpp"
#include "reflex/dsl/validate.hpp"
#include "reflex/engine/engine.hpp"
#include "reflex/learn/viterbi.hpp"
#include "reflex/sim/grasping.hpp"
#include "reflex/sim/pepper.hpp"
#include "reflex/sim/scenario.hpp"
#include "reflex/sim/simulator.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace reflex;
using nlohmann::json;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double threshold_far = 5.1;
constexpr double threshold_near = 2.7;
constexpr double tolerance = 0.3;

/// Outcome of one criterion; `detail` explains a failure.
struct Verdict {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

std::string run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "reflex");
    std::ostringstream out, err;
    if (cli::dispatch(args, out, err) != 0) {
        std::string cmd;
        for (const auto& a : args) cmd += a + ' ';
        throw std::runtime_error(cmd + "failed: " + err.str());
    }
    return out.str();
}

/// A node instantiated at top level with its guard interval and the
/// associations in its body.
struct Branch {
    std::string name;
    std::set<std::string> associations;
    double lower = -inf;
    double upper = inf;
};

std::vector<Branch> branches(const dsl::ScriptAst& ast) {
    std::vector<Branch> out;
    for (const auto& s : ast.statements) {
        const auto* node = ast.find_node(s.head);
        if (!node) continue;
        Branch b{s.head, {}, -inf, inf};
        for (const auto& m : node->body) b.associations.insert(m.target ? m.head + "@" + *m.target : m.head);
        if (s.evaluation) {
            if (const auto* t = std::get_if<dsl::Threshold>(&*s.evaluation)) {
                (t->op == dsl::Comparison::greater ? b.lower : b.upper) = t->value;
            } else if (const auto* band = std::get_if<dsl::Band>(&*s.evaluation)) {
                b.lower = band->lower;
                b.upper = band->upper;
            }
        }
        out.push_back(b);
    }
    return out;
}

const Branch* far_branch(const std::vector<Branch>& bs) {
    for (const auto& b : bs) {
        if (std::isfinite(b.lower) && !std::isfinite(b.upper)) return &b;
    }
    return nullptr;
}

const Branch* near_branch(const std::vector<Branch>& bs) {
    for (const auto& b : bs) {
        if (!std::isfinite(b.lower) && std::isfinite(b.upper)) return &b;
    }
    return nullptr;
}

std::string join(const std::set<std::string>& s) {
    std::string out;
    for (const auto& x : s) out += (out.empty() ? "" : ",") + x;
    return out;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// ---------------------------------------------------------------------------

Verdict viterbi_oracle(std::string& note) {
    Verdict v;
    Timer timer;
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(-4.0, 0.0);
    int matched = 0;
    for (int instance = 0; instance < 200; ++instance) {
        const std::size_t steps = 1 + rng() % 8;
        const std::size_t states = 1 + rng() % 4;
        learn::EmissionMatrix e(steps, states);
        // Every other instance draws from a few levels so that ties occur.
        for (auto& x : e.values) x = instance % 2 ? u(rng) : -static_cast<double>(rng() % 3);

        std::vector<int> path(steps, 0), best_path;
        double best = -inf;
        for (;;) {
            double score = 0.0;
            for (std::size_t t = 0; t < steps; ++t) score += e.at(t, path[t]);
            if (best_path.empty() || score > best + 1e-9 * (1.0 + std::abs(best))) {
                best = score;
                best_path = path;
            }
            std::size_t i = steps;
            while (i > 0 && path[i - 1] == static_cast<int>(states) - 1) path[--i] = 0;
            if (i == 0) break;
            ++path[i - 1];
        }
        if (learn::viterbi(e) == best_path) {
            ++matched;
        } else {
            v.fail("instance " + std::to_string(instance) + " differs from exhaustive search");
        }
    }
    const double secs = timer.seconds();
    if (secs >= 5.0) v.fail("took " + std::to_string(secs) + " s");
    note = std::to_string(matched) + "/200 exact, " + std::to_string(secs) + " s";
    return v;
}

struct Recovery {
    fs::path source;   ///< demonstration dataset
    fs::path learned;  ///< emitted script
    dsl::ScriptAst truth;
    dsl::ScriptAst script;
};

Recovery recover(const fs::path& work, int demonstrator, double& seconds) {
    Timer timer;
    Recovery r;
    const auto gt = test::data_path("scripts/demonstrator" + std::to_string(demonstrator) + ".pf");
    r.truth = dsl::parse_script(test::read_file(gt));
    r.source = work / ("demo" + std::to_string(demonstrator) + ".jsonl");
    r.learned = work / ("learned_demonstrator" + std::to_string(demonstrator) + ".pf");
    run_cli({"synth-demo", "--script", gt.string(), "--scenario", "corridor", "-o", r.source.string()});
    run_cli({"learn", "--data", r.source.string(), "--delta", "0.3", "-o", r.learned.string()});
    r.script = dsl::parse_script(test::read_file(r.learned));
    seconds = timer.seconds();
    return r;
}

Verdict check_recovery(const Recovery& r, std::string& note) {
    Verdict v;
    const auto truth = branches(r.truth);
    const auto learned = branches(r.script);
    if (learned.size() != 2) v.fail("expected 2 groups, got " + std::to_string(learned.size()));
    if (!r.script.statements.empty()) {
        for (const auto& s : r.script.statements) {
            const bool sensor = sim::pepper_registry().find_sensor(s.head) != nullptr;
            if (!sensor && !r.script.find_node(s.head)) v.fail("ungrouped leaf " + s.head);
        }
    }
    const auto* tf = far_branch(truth);
    const auto* tn = near_branch(truth);
    const auto* lf = far_branch(learned);
    const auto* ln = near_branch(learned);
    if (!tf || !tn) throw std::logic_error("ground-truth script lacks its two branches");
    if (!lf || !ln) {
        v.fail("learned script lacks a far or near branch");
        return v;
    }
    if (lf->associations != tf->associations) {
        v.fail("far branch {" + join(lf->associations) + "} != {" + join(tf->associations) + "}");
    }
    if (ln->associations != tn->associations) {
        v.fail("near branch {" + join(ln->associations) + "} != {" + join(tn->associations) + "}");
    }
    if (std::abs(lf->lower - threshold_far) > tolerance) v.fail("far threshold " + std::to_string(lf->lower));
    if (std::abs(ln->upper - threshold_near) > tolerance) v.fail("near threshold " + std::to_string(ln->upper));
    std::ostringstream n;
    n << "far d > " << lf->lower << " {" << join(lf->associations) << "}, near d < " << ln->upper << " {"
      << join(ln->associations) << "}";
    note = n.str();
    return v;
}

/// Swaps the guards of the two learned branches.
fs::path permuted_ablation(const Recovery& r) {
    auto ast = r.script;
    std::vector<dsl::Statement*> guarded;
    for (auto& s : ast.statements) {
        if (ast.find_node(s.head) && s.evaluation) guarded.push_back(&s);
    }
    if (guarded.size() != 2) throw std::runtime_error("ablation needs two guarded branches");
    std::swap(guarded[0]->evaluation, guarded[1]->evaluation);
    const fs::path out = fs::path(r.learned).replace_extension(".permuted.pf");
    std::ofstream(out) << dsl::format_script(ast);
    return out;
}

double loss(const fs::path& data, const fs::path& script) {
    return std::stod(run_cli({"loss", "--data", data.string(), "--script", script.string()}));
}

Verdict loss_ordering(const fs::path& work, const std::vector<Recovery>& runs, std::string& note) {
    Verdict v;
    std::ostringstream n;
    n << std::scientific;
    n.precision(2);
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const auto& r = runs[k];
        const fs::path self = work / ("self" + std::to_string(k + 1) + ".jsonl");
        run_cli({"synth-demo", "--script", r.learned.string(), "-o", self.string()});
        const double self_loss = loss(self, r.learned);
        const double learned_loss = loss(r.source, r.learned);
        const double permuted_loss = loss(r.source, permuted_ablation(r));
        if (!(self_loss <= 1e-6)) v.fail("self loss " + std::to_string(self_loss));
        if (!(learned_loss < permuted_loss)) v.fail("learned loss not below the permuted ablation");
        n << "run " << k + 1 << ": self " << self_loss << ", learned " << learned_loss << " < permuted "
          << permuted_loss << "; ";
    }
    note = n.str();
    return v;
}

// ---------------------------------------------------------------------------

bool exclusive(const engine::Engine& engine, const engine::TickResult& r) {
    std::map<std::string, int> count;
    for (int id : r.activations.active) {
        const auto& leaf = engine.tree().leaves[id];
        if (leaf.resource && ++count[*leaf.resource] > 1) return false;
    }
    for (const auto& [res, winner] : r.activations.per_resource_winner) {
        if (!r.activations.contains(winner) || engine.tree().leaves[winner].resource != res) return false;
    }
    return true;
}

std::vector<std::string> normalized(std::vector<std::string> labels) {
    static const std::regex suffix("#[0-9]+");
    for (auto& l : labels) l = std::regex_replace(l, suffix, "");
    std::sort(labels.begin(), labels.end());
    return labels;
}

std::string trace_bytes(const engine::Engine& engine, const sim::Scenario& scenario, std::uint64_t seed) {
    sim::Simulator simulator(scenario, seed);
    std::ostringstream out;
    engine::write_trace(engine, engine.run(simulator, 60, 50.0), out);
    return out.str();
}

Verdict runtime_properties(std::string& note) {
    Verdict v;
    std::mt19937_64 rng(1234567);
    const auto pepper = sim::pepper_registry();
    const auto grasping = sim::grasping_registry();
    const engine::Engine grasping_example(
        engine::compile(dsl::validate(
            dsl::parse_script(test::read_file(test::data_path("scripts/grasping.pf"))), grasping)),
        sim::grasping_bindings({}));
    int look_at_id = -1, search_id = -1, grasp_id = -1;
    for (const auto& leaf : grasping_example.tree().leaves) {
        if (leaf.primitive == "look_at") look_at_id = leaf.id;
        if (leaf.primitive == "head_search") search_id = leaf.id;
        if (leaf.primitive == "grasp") grasp_id = leaf.id;
    }
    auto noisy = sim::corridor_scenario();
    noisy.heading_noise = 0.05;

    int violations = 0;
    int seen_cases = 0;
    auto violation = [&](int c, const std::string& what) {
        ++violations;
        v.fail("case " + std::to_string(c) + ": " + what);
    };
    for (int c = 0; c < 1000; ++c) {
        // Exclusivity and permutation invariance over a few ticks.
        const auto ast = test::random_script(rng, pepper, true);
        auto shuffled = ast;
        std::shuffle(shuffled.statements.begin(), shuffled.statements.end(), rng);
        const engine::Engine a(engine::compile(dsl::validate(ast, pepper)), sim::pepper_bindings({}));
        const engine::Engine b(engine::compile(dsl::validate(shuffled, pepper)), sim::pepper_bindings({}));
        engine::Memory ma, mb;
        for (int k = 0; k < 4; ++k) {
            const auto world = test::random_world(rng);
            auto ra = a.tick(world, std::move(ma));
            auto rb = b.tick(world, std::move(mb));
            if (!exclusive(a, ra) || !exclusive(b, rb)) violation(c, "resource exclusivity");
            if (normalized(a.active_labels(ra.activations)) != normalized(b.active_labels(rb.activations)) ||
                !(ra.commands == rb.commands)) {
                violation(c, "statement order changed the outcome");
            }
            ma = std::move(ra.memory);
            mb = std::move(rb.memory);
        }

        // Grasping example: look_at (priority 2) holds the head whenever the ball is
        // in view; otherwise head_search does.
        const auto world = test::random_world(rng);
        const double gaze = world.agent.body_yaw + world.agent.head_yaw;
        const bool in_view = std::abs(sim::wrap_angle(sim::bearing(world.agent.position, world.visitor.position) -
                                                      gaze)) <= sim::ball_fov;
        // Memory starts empty, so the ball's position is only known once seen.
        const bool close =
            in_view && sim::distance(world.agent.position, world.visitor.position) < sim::close_range;
        const auto r = grasping_example.tick(world, {});
        seen_cases += in_view;
        if (r.activations.per_resource_winner.at("head") != (in_view ? look_at_id : search_id)) {
            violation(c, "grasping example head precedence");
        }
        if ((r.activations.per_resource_winner.count("arm") == 1) != close ||
            (close && r.activations.per_resource_winner.at("arm") != grasp_id)) {
            violation(c, "grasping example grasp guard");
        }
        if (!exclusive(grasping_example, r)) violation(c, "grasping example exclusivity");

        // Determinism: two runs with the same seed write identical traces.
        if (c % 4 == 0) {
            const std::uint64_t seed = rng();
            if (trace_bytes(a, noisy, seed) != trace_bytes(a, noisy, seed)) violation(c, "seeded runs differ");
        }
    }
    note = "1000 cases, " + std::to_string(violations) + " violations (" + std::to_string(seen_cases) +
           " with the ball in view)";
    if (seen_cases == 0 || seen_cases == 1000) v.fail("grasping example cases never exercised both outcomes");
    return v;
}

Verdict parser_corpus(const std::vector<fs::path>& emitted, std::string& note) {
    Verdict v;
    auto files = test::corpus_files();
    const bool has_grasping = std::any_of(files.begin(), files.end(), [](const fs::path& p) {
        return test::read_file(p) == test::read_file(test::data_path("scripts/grasping.pf"));
    });
    if (!has_grasping) v.fail("corpus lacks the grasping example script");
    files.insert(files.end(), emitted.begin(), emitted.end());
    for (const auto& f : files) {
        try {
            const auto first = dsl::parse_script(test::read_file(f));
            const auto text = dsl::format_script(first);
            const auto second = dsl::parse_script(text);
            if (!dsl::same_structure(first, second) || dsl::format_script(second) != text) {
                v.fail(f.filename().string() + " is not a round-trip fixed point");
            }
        } catch (const std::exception& e) {
            v.fail(f.filename().string() + ": " + e.what());
        }
    }
    for (const auto& f : emitted) {
        try {
            run_cli({"check", f.string()});
            run_cli({"fmt", "--check", f.string()});
        } catch (const std::exception& e) {
            v.fail(e.what());
        }
    }
    if (files.size() < 20) v.fail("only " + std::to_string(files.size()) + " scripts");
    note = std::to_string(files.size()) + " scripts (" + std::to_string(emitted.size()) + " emitted)";
    return v;
}

Verdict robustness(const fs::path& work, const Recovery& demo2, std::string& note) {
    Verdict v;
    const auto learned = branches(demo2.script);
    const auto* far = far_branch(learned);
    const auto* near = near_branch(learned);
    if (!far || !near) {
        v.fail("learned script lacks a far or near branch");
        return v;
    }
    const engine::BehaviorTree tree =
        engine::compile(dsl::validate(demo2.script, sim::pepper_registry()));
    std::map<std::string, std::string> resource_of;
    for (const auto& leaf : tree.leaves) {
        if (leaf.resource) resource_of[leaf.label] = *leaf.resource;
    }
    std::ostringstream n;
    for (const std::string scenario : {"corridor", "pass_by", "approach_leave_return"}) {
        const fs::path trace = work / ("replay_" + scenario + ".jsonl");
        run_cli({"run", "--script", demo2.learned.string(), "--scenario", scenario, "--ticks", "1000000", "-o",
                 trace.string()});
        std::ifstream in(trace);
        std::string line;
        int ticks = 0, far_ticks = 0, near_ticks = 0;
        while (std::getline(in, line)) {
            const auto j = json::parse(line);
            ++ticks;
            const auto& w = j["world"];
            const double d = std::hypot(w["visitor"]["x"].get<double>() - w["stand"]["x"].get<double>(),
                                        w["visitor"]["y"].get<double>() - w["stand"]["y"].get<double>());
            const auto active = j["branches"].get<std::vector<std::string>>();
            auto has = [&](const std::string& b) { return std::find(active.begin(), active.end(), b) != active.end(); };
            if (d > far->lower + tolerance) {
                ++far_ticks;
                if (!has(far->name) || has(near->name)) {
                    v.fail(scenario + " tick " + std::to_string(j["tick"].get<int>()) + ": far branch not active");
                }
            }
            if (d < near->upper - tolerance) {
                ++near_ticks;
                if (!has(near->name) || has(far->name)) {
                    v.fail(scenario + " tick " + std::to_string(j["tick"].get<int>()) + ": near branch not active");
                }
            }
            std::map<std::string, int> per_resource;
            for (const auto& label : j["active"].get<std::vector<std::string>>()) {
                const auto it = resource_of.find(label);
                if (it != resource_of.end() && ++per_resource[it->second] > 1) {
                    v.fail(scenario + ": two leaves on " + it->second);
                }
            }
        }
        if (ticks == 0) v.fail(scenario + ": empty trace");
        n << scenario << " " << ticks << " ticks (" << far_ticks << " far, " << near_ticks << " near); ";
    }
    note = n.str();
    return v;
}

}  // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / "reflex-acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    int failures = 0;
    auto report = [&](int number, const std::string& title, const std::function<Verdict(std::string&)>& body) {
        std::string note;
        Verdict v;
        try {
            v = body(note);
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << number << ": " << title;
        if (!note.empty()) std::cout << " [" << note << "]";
        if (!v.pass) std::cout << " -- " << v.detail;
        std::cout << std::endl;
        failures += !v.pass;
    };

    report(1, "Viterbi equals exhaustive search on 200 random instances", viterbi_oracle);

    std::vector<Recovery> runs;
    std::vector<fs::path> emitted;
    report(2, "closed-loop recovery of demonstrator 1", [&](std::string& note) {
        double secs = 0.0;
        runs.push_back(recover(work, 1, secs));
        emitted.push_back(runs.back().learned);
        auto v = check_recovery(runs.back(), note);
        if (secs >= 30.0) v.fail("took " + std::to_string(secs) + " s");
        note += ", " + std::to_string(secs) + " s";
        return v;
    });
    report(3, "closed-loop recovery of demonstrator 2", [&](std::string& note) {
        double secs = 0.0;
        Recovery r = recover(work, 2, secs);
        runs.push_back(r);
        emitted.push_back(r.learned);
        auto v = check_recovery(r, note);
        const auto learned = branches(r.script);
        const auto* far = far_branch(learned);
        const auto* near = near_branch(learned);
        if (!far || !far->associations.count("go_toward@visitor")) v.fail("far branch lacks go_toward@visitor");
        if (!near || !near->associations.count("go_toward@front_of_stand")) {
            v.fail("near branch lacks go_toward@front_of_stand");
        }
        return v;
    });
    report(4, "imitation loss: self-consistency and threshold ablation", [&](std::string& note) {
        if (runs.size() != 2) throw std::runtime_error("recovery runs missing");
        return loss_ordering(work, runs, note);
    });
    report(5, "runtime properties on randomized cases", runtime_properties);
    report(6, "parser corpus round trip", [&](std::string& note) { return parser_corpus(emitted, note); });
    report(7, "robustness of the learned demonstrator 2 script", [&](std::string& note) {
        const auto it = std::find_if(runs.begin(), runs.end(), [](const Recovery& r) {
            return r.learned.filename() == "learned_demonstrator2.pf";
        });
        if (it == runs.end()) throw std::runtime_error("demonstrator 2 was not learned");
        return robustness(work, *it, note);
    });

    return failures == 0 ? 0 : 1;
}
