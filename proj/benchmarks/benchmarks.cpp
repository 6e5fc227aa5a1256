#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

#include "reflex/dsl/format.hpp"
#include "reflex/dsl/parser.hpp"
#include "reflex/dsl/validate.hpp"
#include "reflex/engine/engine.hpp"
#include "reflex/learn/pipeline.hpp"
#include "reflex/learn/viterbi.hpp"
#include "reflex/sim/pepper.hpp"
#include "reflex/sim/scenario.hpp"
#include "reflex/sim/simulator.hpp"
#include "reflex/sim/synth.hpp"

using namespace reflex;

namespace {

std::string read_script(const std::string& name) {
    std::ifstream in(std::string(REFLEX_DATA_DIR) + "/scripts/" + name);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

dsl::CheckedScript demonstrator1() {
    return dsl::validate(dsl::parse_script(read_script("demonstrator1.pf")), sim::pepper_registry());
}

void viterbi_decode(benchmark::State& state) {
    const auto steps = static_cast<std::size_t>(state.range(0));
    const auto states = static_cast<std::size_t>(state.range(1));
    learn::EmissionMatrix e(steps, states);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-5.0, 0.0);
    for (auto& v : e.values) v = u(rng);
    for (auto _ : state) benchmark::DoNotOptimize(learn::viterbi(e));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * steps));
}
BENCHMARK(viterbi_decode)->Args({850, 4})->Args({850, 6})->Args({10000, 6});

void engine_tick(benchmark::State& state) {
    const engine::Engine engine(engine::compile(demonstrator1()), sim::pepper_bindings({}));
    auto world = sim::initial_world(sim::corridor_scenario());
    engine::Memory memory;
    for (auto _ : state) {
        auto r = engine.tick(world, std::move(memory));
        memory = std::move(r.memory);
        benchmark::DoNotOptimize(r.commands);
    }
}
BENCHMARK(engine_tick);

void parse_and_format(benchmark::State& state) {
    const std::string text = read_script("demonstrator1.pf");
    for (auto _ : state) benchmark::DoNotOptimize(dsl::format_script(dsl::parse_script(text)));
}
BENCHMARK(parse_and_format);

void learn_demonstration(benchmark::State& state) {
    const auto data = sim::synth_demo(demonstrator1(), sim::corridor_scenario(), 0, 50.0);
    const auto registry = sim::pepper_registry();
    for (auto _ : state) benchmark::DoNotOptimize(learn::learn(data, registry, {}));
}
BENCHMARK(learn_demonstration)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
