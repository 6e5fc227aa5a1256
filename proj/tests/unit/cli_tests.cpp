#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "reflex/sim/dataset.hpp"
#include "support.hpp"

using namespace reflex;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "reflex");
    std::ostringstream out, err;
    const int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::string script(const std::string& name) { return test::data_path("scripts/" + name).string(); }

}  // namespace

TEST_CASE("cli: help and unknown commands") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"juggle"}).code != 0);
    CHECK(run({}).code != 0);
    CHECK(run({"check"}).code != 0);  // missing file
}

TEST_CASE("cli: fmt") {
    test::TempDir dir;
    const auto file = dir / "messy.pf";
    std::ofstream(file) << "waving whenever d>3.0,priority of 2\n\n\nvisitor_detection\n";
    auto r = run({"fmt", file});
    CHECK(r.code == 0);
    CHECK(r.out == "waving whenever d > 3.0, priority of 2\nvisitor_detection\n");
    CHECK(run({"fmt", "--check", file}).code == 1);
    CHECK(run({"fmt", "-o", dir / "clean.pf", file}).code == 0);
    CHECK(run({"fmt", "--check", dir / "clean.pf"}).code == 0);
    CHECK(run({"fmt", "-i", file}).code == 0);
    CHECK(test::read_file(file) == r.out);

    std::ofstream(dir / "broken.pf") << "node :\n";
    r = run({"fmt", dir / "broken.pf"});
    CHECK(r.code == 1);
    CHECK(r.err.find("broken.pf:1:") != std::string::npos);
    CHECK(run({"fmt", dir / "missing.pf"}).code == 1);
}

TEST_CASE("cli: check against the built-in registries") {
    auto r = run({"check", script("demonstrator1.pf")});
    CHECK(r.code == 0);
    CHECK(r.out.find(": ok") != std::string::npos);
    CHECK(r.out.find("wheels_translation") != std::string::npos);

    CHECK(run({"check", script("grasping.pf")}).code == 1);
    r = run({"--registry", "grasping", "check", script("grasping.pf")});
    CHECK(r.code == 0);
    CHECK(r.out.find("resources: arm head") != std::string::npos);
    CHECK(run({"--registry", "nonsense", "check", script("demonstrator1.pf")}).code == 1);

    test::TempDir dir;
    std::ofstream(dir / "bad.pf") << "look_at targeting nobody\n";
    r = run({"check", dir / "bad.pf"});
    CHECK(r.code == 1);
    CHECK(r.err.find("nobody") != std::string::npos);
}

TEST_CASE("cli: registry from the environment") {
    ::setenv(cli::registry_env, "grasping", 1);
    CHECK(run({"check", script("grasping.pf")}).code == 0);
    ::unsetenv(cli::registry_env);
    CHECK(run({"check", script("grasping.pf")}).code == 1);
}

TEST_CASE("cli: synth, learn, loss, run and plot") {
    test::TempDir dir;
    auto r = run({"synth-demo", "--script", script("demonstrator2.pf"), "--seed", "0", "-o", dir / "d2.jsonl"});
    REQUIRE(r.code == 0);
    CHECK(sim::load_dataset(dir / "d2.jsonl").size() > 500);

    r = run({"learn", "--data", dir / "d2.jsonl", "-o", dir / "learned.pf", "--report", dir / "report.json"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("learned 2 groups") != std::string::npos);
    CHECK(run({"check", dir / "learned.pf"}).code == 0);
    CHECK(run({"fmt", "--check", dir / "learned.pf"}).code == 0);
    const auto report = nlohmann::json::parse(test::read_file(dir / "report.json"));
    CHECK(report.contains("bands"));
    CHECK(report["groups"].size() == 2);

    r = run({"loss", "--data", dir / "d2.jsonl", "--script", dir / "learned.pf"});
    REQUIRE(r.code == 0);
    CHECK(std::stod(r.out) < 1e-4);

    r = run({"run", "--script", dir / "learned.pf", "--ticks", "100", "-o", dir / "trace.jsonl"});
    REQUIRE(r.code == 0);
    std::istringstream trace(test::read_file(dir / "trace.jsonl"));
    std::string line;
    int lines = 0;
    while (std::getline(trace, line)) {
        CHECK(nlohmann::json::parse(line)["tick"] == lines);
        ++lines;
    }
    CHECK(lines == 100);
    r = run({"run", "--script", dir / "learned.pf", "--ticks", "100000", "-o", dir / "long.jsonl"});
    CHECK(r.out.find("ended early") != std::string::npos);

    r = run({"report-plot", "--report", dir / "report.json", "-o", dir / "bands.svg"});
    REQUIRE(r.code == 0);
    CHECK(test::read_file(dir / "bands.svg").rfind("<svg", 0) == 0);

    CHECK(run({"learn", "--data", dir / "d2.jsonl", "-o", dir / "x.pf", "--delta", "-1"}).code == 1);
    CHECK(run({"learn", "--data", dir / "none.jsonl", "-o", dir / "x.pf"}).code == 1);
    CHECK(run({"--registry", "grasping", "synth-demo", "--script", script("grasping.pf"), "-o",
               dir / "g.jsonl"})
              .code == 1);
}

TEST_CASE("cli: learner config file") {
    test::TempDir dir;
    REQUIRE(run({"synth-demo", "--script", script("demonstrator1.pf"), "-o", dir / "d1.jsonl"}).code == 0);
    std::ofstream(dir / "config.json") << R"({"min_support": 100000})";
    auto r = run({"learn", "--data", dir / "d1.jsonl", "--config", dir / "config.json", "-o", dir / "flat.pf"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("learned 0 groups and 0 ungrouped") != std::string::npos);
    std::ofstream(dir / "bad.json") << R"({"min_support": 0})";
    CHECK(run({"learn", "--data", dir / "d1.jsonl", "--config", dir / "bad.json", "-o", dir / "x.pf"}).code == 1);
}
