#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "reflex/dsl/format.hpp"
#include "reflex/dsl/parser.hpp"
#include "reflex/dsl/validate.hpp"
#include "reflex/engine/engine.hpp"
#include "reflex/learn/loss.hpp"
#include "reflex/learn/pipeline.hpp"
#include "reflex/session/server.hpp"
#include "reflex/sim/grasping.hpp"
#include "reflex/sim/pepper.hpp"
#include "reflex/sim/simulator.hpp"
#include "reflex/sim/synth.hpp"

namespace reflex::cli {
namespace {

std::atomic<bool> interrupted{false};

class Failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure("cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure("cannot write " + path);
    out << text;
}

std::string default_registry() {
    const char* env = std::getenv(registry_env);
    return env && *env ? env : "pepper";
}

dsl::CheckedScript load_checked(const std::string& path, const dsl::PrimitiveRegistry& registry) {
    const std::string text = read_text(path);
    try {
        return dsl::validate(dsl::parse_script(text), registry);
    } catch (const dsl::ParseError& e) {
        throw Failure(path + ":" + e.what());
    } catch (const dsl::ValidationError& e) {
        std::string message;
        for (const auto& d : e.diagnostics) message += (message.empty() ? "" : "\n") + path + ":" + d.to_string();
        throw Failure(message);
    }
}

void require_pepper(const std::string& registry) {
    if (registry != "pepper") throw Failure("simulation commands run the built-in pepper registry only");
}

}  // namespace

dsl::PrimitiveRegistry resolve_registry(const std::string& name_or_path) {
    if (name_or_path == "pepper") return sim::pepper_registry();
    if (name_or_path == "grasping") return sim::grasping_registry();
    return dsl::load_registry(name_or_path);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reactive behavior scripts: format, check, simulate, learn from demonstrations"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string registry_name = default_registry();
    app.add_option("--registry", registry_name, "Primitive registry: pepper, grasping or a JSON file")
        ->envname(registry_env);

    std::string fmt_file, fmt_output;
    bool fmt_in_place = false, fmt_check = false;
    auto* fmt = app.add_subcommand("fmt", "Print a script in canonical form");
    fmt->add_option("file", fmt_file, "Script file")->required();
    fmt->add_option("-o,--output", fmt_output, "Write here instead of stdout");
    fmt->add_flag("-i,--in-place", fmt_in_place, "Rewrite the file");
    fmt->add_flag("--check", fmt_check, "Fail if the file is not canonical");

    std::string check_file;
    auto* check = app.add_subcommand("check", "Validate a script against the registry");
    check->add_option("file", check_file, "Script file")->required();

    std::string synth_script, synth_scenario = "corridor", synth_output;
    std::uint64_t synth_seed = 0;
    bool synth_seed_given = false;
    double synth_hz = 50.0;
    auto* synth = app.add_subcommand("synth-demo", "Record a demonstration by running a script in simulation");
    synth->add_option("--script", synth_script, "Ground-truth script")->required();
    synth->add_option("--scenario", synth_scenario, "Built-in scenario name or scenario file");
    auto* seed_opt = synth->add_option("--seed", synth_seed, "Visitor noise seed (default: the scenario's)");
    synth->add_option("--hz", synth_hz, "Tick frequency")->check(CLI::PositiveNumber);
    synth->add_option("-o,--output", synth_output, "Dataset file (JSONL)")->required();

    std::string learn_data, learn_config, learn_output, learn_report, learn_scenario;
    std::optional<double> learn_delta, learn_lambda, learn_margin;
    std::optional<int> learn_support;
    auto* learn_cmd = app.add_subcommand("learn", "Learn a script from a demonstration dataset");
    learn_cmd->add_option("--data", learn_data, "Dataset file (JSONL)")->required();
    learn_cmd->add_option("--config", learn_config, "Learner config (JSON)");
    learn_cmd->add_option("-o,--output", learn_output, "Learned script")->required();
    learn_cmd->add_option("--report", learn_report, "Activation report (JSON)");
    learn_cmd->add_option("--scenario", learn_scenario, "Scenario supplying agent limits and corridor");
    learn_cmd->add_option("--delta", learn_delta, "Grouping tolerance, m");
    learn_cmd->add_option("--lambda-idle", learn_lambda, "Idle-state log-likelihood");
    learn_cmd->add_option("--margin", learn_margin, "Interval widening, m");
    learn_cmd->add_option("--min-support", learn_support, "Minimum active samples per association");

    std::string run_script, run_scenario = "corridor", run_output;
    std::int64_t run_ticks = 0;
    double run_hz = 50.0;
    std::uint64_t run_seed = 0;
    auto* run = app.add_subcommand("run", "Run a script closed loop and write the trace");
    run->add_option("--script", run_script, "Script")->required();
    run->add_option("--scenario", run_scenario, "Built-in scenario name or scenario file");
    run->add_option("--ticks", run_ticks, "Ticks to run")->required()->check(CLI::NonNegativeNumber);
    run->add_option("--hz", run_hz, "Tick frequency")->check(CLI::PositiveNumber);
    auto* run_seed_opt = run->add_option("--seed", run_seed, "Visitor noise seed (default: the scenario's)");
    run->add_option("-o,--output", run_output, "Trace file (JSONL)")->required();

    std::string loss_data, loss_script, loss_scenario = "corridor";
    auto* loss = app.add_subcommand("loss", "Imitation loss of a script against a dataset");
    loss->add_option("--data", loss_data, "Dataset file (JSONL)")->required();
    loss->add_option("--script", loss_script, "Script")->required();
    loss->add_option("--scenario", loss_scenario, "Scenario supplying agent limits and corridor");

    session::ServiceConfig serve_config;
    std::string serve_address = "127.0.0.1";
    unsigned short serve_port = 8765;
    std::string serve_files = ".";
    auto* serve = app.add_subcommand("serve", "Start the session service");
    serve->add_option("--scenario", serve_config.scenario, "Default scenario for new sessions");
    serve->add_option("--port", serve_port, "TCP port");
    serve->add_option("--address", serve_address, "Bind address");
    serve->add_option("--hz", serve_config.hz, "Tick frequency")->check(CLI::PositiveNumber);
    serve->add_option("--broadcast-hz", serve_config.broadcast_hz, "Tick message rate")->check(CLI::PositiveNumber);
    serve->add_option("--speed", serve_config.speed, "Simulated seconds per second")->check(CLI::PositiveNumber);
    serve->add_option("--files", serve_files, "Directory for datasets and scripts");

    std::string plot_report, plot_output;
    auto* plot = app.add_subcommand("report-plot", "Render activation bands from a learn report as SVG");
    plot->add_option("--report", plot_report, "Report from learn --report")->required();
    plot->add_option("-o,--output", plot_output, "SVG file")->required();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }
    synth_seed_given = seed_opt->count() > 0;

    try {
        const dsl::PrimitiveRegistry registry = resolve_registry(registry_name);

        if (*fmt) {
            const std::string text = read_text(fmt_file);
            dsl::ScriptAst ast;
            try {
                ast = dsl::parse_script(text);
            } catch (const dsl::ParseError& e) {
                throw Failure(fmt_file + ":" + e.what());
            }
            const std::string canonical = dsl::format_script(ast);
            if (fmt_check) {
                if (canonical != text) {
                    err << fmt_file << ": not in canonical form\n";
                    return 1;
                }
                return 0;
            }
            if (fmt_in_place) {
                write_text(fmt_file, canonical);
            } else if (!fmt_output.empty()) {
                write_text(fmt_output, canonical);
            } else {
                out << canonical;
            }
            return 0;
        }

        if (*check) {
            const auto checked = load_checked(check_file, registry);
            out << check_file << ": ok, " << checked.statements.size() << " top-level statements, "
                << checked.nodes.size() << " nodes";
            const auto resources = checked.resources();
            if (!resources.empty()) {
                out << ", resources:";
                for (const auto& r : resources) out << ' ' << r;
            }
            out << '\n';
            return 0;
        }

        if (*synth) {
            require_pepper(registry_name);
            const auto checked = load_checked(synth_script, registry);
            const sim::Scenario scenario = sim::resolve_scenario(synth_scenario);
            const auto seed = synth_seed_given ? synth_seed : scenario.seed;
            const sim::Dataset dataset = sim::synth_demo(checked, scenario, seed, synth_hz);
            sim::save_dataset(dataset, synth_output);
            out << "wrote " << dataset.size() << " samples to " << synth_output << '\n';
            return 0;
        }

        if (*learn_cmd) {
            require_pepper(registry_name);
            learn::LearnConfig config;
            if (!learn_config.empty()) config = learn::load_learn_config(learn_config);
            if (!learn_scenario.empty()) {
                const sim::Scenario s = sim::resolve_scenario(learn_scenario);
                config.params = s.params;
                config.bounds = s.corridor;
            }
            if (learn_delta) config.delta = *learn_delta;
            if (learn_lambda) config.lambda_idle = *learn_lambda;
            if (learn_margin) config.margin = *learn_margin;
            if (learn_support) config.min_support = *learn_support;
            const sim::Dataset dataset = sim::load_dataset(learn_data);
            const learn::LearnResult result = learn::learn(dataset, registry, config);
            write_text(learn_output, dsl::format_script(result.script));
            if (!learn_report.empty()) write_text(learn_report, learn::report_json(result));
            out << "learned " << result.tree.groups.size() << " groups and " << result.tree.ungrouped.size()
                << " ungrouped leaves from " << dataset.size() << " samples; wrote " << learn_output << '\n';
            return 0;
        }

        if (*run) {
            require_pepper(registry_name);
            const auto checked = load_checked(run_script, registry);
            const sim::Scenario scenario = sim::resolve_scenario(run_scenario);
            const engine::Engine engine(engine::compile(checked), sim::pepper_bindings(scenario.params));
            sim::Simulator simulator(scenario, run_seed_opt->count() ? std::optional(run_seed) : std::nullopt);
            const engine::Trace trace = engine.run(simulator, run_ticks, run_hz);
            std::ofstream file(run_output, std::ios::binary | std::ios::trunc);
            if (!file) throw Failure("cannot write " + run_output);
            engine::write_trace(engine, trace, file);
            out << "wrote " << trace.records.size() << " ticks to " << run_output;
            if (trace.truncated) out << " (scenario ended early)";
            out << '\n';
            return 0;
        }

        if (*loss) {
            require_pepper(registry_name);
            const auto checked = load_checked(loss_script, registry);
            const sim::Dataset dataset = sim::load_dataset(loss_data);
            const double value = learn::imitation_loss(dataset, checked, sim::resolve_scenario(loss_scenario));
            out << std::setprecision(9) << value << '\n';
            return 0;
        }

        if (*serve) {
            require_pepper(registry_name);
            serve_config.files_dir = serve_files;
            std::filesystem::create_directories(serve_config.files_dir);
            sim::resolve_scenario(serve_config.scenario);
            session::SessionHost host(serve_config);
            session::Server server(host, serve_address, serve_port);
            host.start();
            server.start();
            out << "listening on ws://" << serve_address << ':' << server.port() << " (files under "
                << serve_config.files_dir.string() << ")" << std::endl;
            interrupted = false;
            auto on_signal = [](int) { interrupted = true; };
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            while (!interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
            server.stop();
            host.stop();
            return 0;
        }

        if (*plot) {
            write_text(plot_output, learn::render_bands_svg(learn::parse_report(read_text(plot_report))));
            out << "wrote " << plot_output << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace reflex::cli
