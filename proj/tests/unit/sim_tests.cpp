#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "reflex/dsl/parser.hpp"
#include "reflex/dsl/validate.hpp"
#include "reflex/sim/dataset.hpp"
#include "reflex/sim/motor.hpp"
#include "reflex/sim/pepper.hpp"
#include "reflex/sim/scenario.hpp"
#include "reflex/sim/simulator.hpp"
#include "reflex/sim/synth.hpp"
#include "support.hpp"

using namespace reflex;
using namespace reflex::sim;

namespace {

constexpr double pi = std::numbers::pi;

dsl::CheckedScript load_pepper_script(const std::string& name) {
    return dsl::validate(dsl::parse_script(test::read_file(test::data_path("scripts/" + name))),
                         pepper_registry());
}

template <typename T>
T as(const ResourceCommand& c) {
    REQUIRE(std::holds_alternative<T>(c));
    return std::get<T>(c);
}

}  // namespace

TEST_CASE("turn_toward saturates at a quarter turn") {
    AgentState agent;
    const auto c = as<YawRateCommand>(motor_command("turn_toward", Vec2{0.0, 2.0}, agent, {}));
    CHECK(c.rate == doctest::Approx(1.0));
    const auto small = as<YawRateCommand>(motor_command("turn_toward", Vec2{10.0, 1.0}, agent, {}));
    CHECK(small.rate == doctest::Approx(1.5 * std::atan2(1.0, 10.0)));
    const auto behind = as<YawRateCommand>(motor_command("turn_toward", Vec2{-1.0, -0.001}, agent, {}));
    CHECK(behind.rate == doctest::Approx(-1.0));
}

TEST_CASE("go_toward stops at the safety distance") {
    AgentState agent;
    AgentParams params;
    const auto at_safe = as<VelocityCommand>(motor_command("go_toward", Vec2{params.d_safe, 0.0}, agent, params));
    CHECK(at_safe.velocity == Vec2{});
    const auto near = as<VelocityCommand>(motor_command("go_toward", Vec2{0.0, 0.8}, agent, params));
    CHECK(near.velocity.x == doctest::Approx(0.0));
    CHECK(near.velocity.y == doctest::Approx(0.8 * 0.2));
    const auto far = as<VelocityCommand>(motor_command("go_toward", Vec2{3.0, 4.0}, agent, params));
    CHECK(norm(far.velocity) == doctest::Approx(params.v_max));
    CHECK(far.velocity.x == doctest::Approx(0.3));
}

TEST_CASE("look_at and point_toward") {
    AgentState agent;
    agent.head_yaw = 0.25;
    const auto head = as<HeadRateCommand>(motor_command("look_at", Vec2{1.0, 1.0}, agent, {}));
    CHECK(head.rate == doctest::Approx(2.0 * (pi / 4 - 0.25)));
    const auto clamped = as<HeadRateCommand>(motor_command("look_at", Vec2{-1.0, 0.1}, agent, {}));
    CHECK(clamped.rate == doctest::Approx(2.0 * (1.0 - 0.25)));
    const auto arm = as<ArmDirective>(motor_command("point_toward", Vec2{0.0, -3.0}, agent, {}));
    CHECK(arm.kind == ArmDirective::Kind::point_at);
    CHECK(arm.direction == doctest::Approx(-pi / 2));
}

TEST_CASE("motor primitives without targets") {
    AgentState agent;
    CHECK(as<YawRateCommand>(motor_command("turn_stop", std::nullopt, agent, {})).rate == 0.0);
    CHECK(as<VelocityCommand>(motor_command("go_stop", std::nullopt, agent, {})).velocity == Vec2{});
    CHECK(as<ArmDirective>(motor_command("waving", std::nullopt, agent, {})).kind == ArmDirective::Kind::wave);
    CHECK(as<ArmDirective>(motor_command("arm_freeze", std::nullopt, agent, {})).kind == ArmDirective::Kind::freeze);
    CHECK_THROWS_AS(motor_command("look_at", std::nullopt, agent, {}), std::invalid_argument);
    CHECK_THROWS_AS(motor_command("dance", std::nullopt, agent, {}), UnknownPrimitive);
}

TEST_CASE("integration at a constant yaw rate") {
    AgentState agent;
    agent.position = {2.5, 1.5};
    MotorCommands c;
    c.wheels_rotation = 0.5;
    for (int i = 0; i < 100; ++i) agent = integrate_agent(agent, c, {}, {}, 0.02);
    CHECK(agent.body_yaw == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(agent.body_yaw_rate == 0.5);
    CHECK(agent.position == Vec2{2.5, 1.5});
}

TEST_CASE("integration with a constant velocity") {
    AgentState agent;
    agent.position = {1.0, 1.0};
    MotorCommands c;
    c.wheels_translation = Vec2{0.3, -0.4};
    for (int i = 0; i < 50; ++i) agent = integrate_agent(agent, c, {}, {}, 0.02);
    CHECK(agent.position.x == doctest::Approx(1.3));
    CHECK(agent.position.y == doctest::Approx(0.6));
    CHECK(agent.linear_velocity == Vec2{0.3, -0.4});
}

TEST_CASE("empty commands leave the agent at rest") {
    AgentState agent;
    agent.position = {1.25, 2.0};
    agent.body_yaw = 0.7;
    agent.head_yaw = -0.3;
    agent.body_yaw_rate = 0.4;
    agent.linear_velocity = {0.1, 0.1};
    const auto next = integrate_agent(agent, {}, {}, {}, 0.02);
    CHECK(next.position == agent.position);
    CHECK(next.body_yaw == agent.body_yaw);
    CHECK(next.head_yaw == agent.head_yaw);
    CHECK(next.body_yaw_rate == 0.0);
    CHECK(next.linear_velocity == Vec2{});
    CHECK(next.arm == ArmState{});
}

TEST_CASE("arm state follows directives") {
    AgentState agent;
    MotorCommands wave;
    wave.arm = ArmDirective{ArmDirective::Kind::wave, 0.0};
    agent = integrate_agent(agent, wave, {}, {}, 0.25);
    CHECK(agent.arm.mode == ArmMode::waving);
    CHECK(agent.arm.angle == doctest::Approx(pi / 2));
    agent = integrate_agent(agent, wave, {}, {}, 0.25);
    CHECK(agent.arm.angle == doctest::Approx(pi));
    MotorCommands point;
    point.arm = ArmDirective{ArmDirective::Kind::point_at, 4.0};
    agent = integrate_agent(agent, point, {}, {}, 0.02);
    CHECK(agent.arm.mode == ArmMode::pointing);
    CHECK(agent.arm.angle == doctest::Approx(4.0 - 2 * pi));
}

TEST_CASE("property: limits hold after any command") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    const AgentParams params;
    const Bounds bounds;
    for (int i = 0; i < 2000; ++i) {
        AgentState agent;
        agent.position = {std::fmod(std::abs(u(rng)), 5.0), std::fmod(std::abs(u(rng)), 3.0)};
        agent.head_yaw = std::fmod(u(rng), 1.0);
        MotorCommands c;
        c.wheels_rotation = u(rng);
        c.wheels_translation = Vec2{u(rng), u(rng)};
        c.head = u(rng);
        const auto next = integrate_agent(agent, c, params, bounds, 0.02 + std::abs(u(rng)) / 10);
        CHECK(bounds.contains(next.position));
        CHECK(std::abs(next.head_yaw) <= params.head_limit);
        CHECK(std::abs(next.body_yaw_rate) <= params.omega_max);
        CHECK(norm(next.linear_velocity) <= params.v_max + 1e-12);
        CHECK(next.body_yaw > -pi);
        CHECK(next.body_yaw <= pi);
    }
}

TEST_CASE("property: go_toward never closes inside the safety distance") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> x(0.0, 5.0), y(0.0, 3.0);
    const AgentParams params;
    for (int trial = 0; trial < 200; ++trial) {
        AgentState agent;
        agent.position = {x(rng), y(rng)};
        const Vec2 target{x(rng), y(rng)};
        const double start = distance(agent.position, target);
        for (int k = 0; k < 500; ++k) {
            MotorCommands c;
            c.apply(motor_command("go_toward", target, agent, params));
            agent = integrate_agent(agent, c, params, {}, 0.02);
        }
        CHECK(distance(agent.position, target) >= std::min(start, params.d_safe) - 1e-9);
    }
}

TEST_CASE("bounds") {
    Bounds b;
    CHECK(b.clamp({-1.0, 4.0}) == Vec2{0.0, 3.0});
    CHECK(b.contains({5.0, 3.0}));
    CHECK_FALSE(b.contains({5.1, 1.0}));
}

TEST_CASE("angles wrap into their ranges") {
    CHECK(wrap_angle(pi) == doctest::Approx(pi));
    CHECK(wrap_angle(-pi) == doctest::Approx(pi));
    CHECK(wrap_angle(3 * pi / 2) == doctest::Approx(-pi / 2));
    CHECK(wrap_phase(-0.5) == doctest::Approx(2 * pi - 0.5));
}

TEST_CASE("scenario: built-ins validate and round trip") {
    for (const auto& s : {corridor_scenario(), pass_by_scenario(), approach_leave_return_scenario()}) {
        CHECK_NOTHROW(s.validate());
        const auto again = parse_scenario(serialize_scenario(s));
        CHECK(serialize_scenario(again) == serialize_scenario(s));
        CHECK(again.visitor_waypoints.size() == s.visitor_waypoints.size());
        CHECK(resolve_scenario(s.name).name == s.name);
        const auto file = load_scenario(test::data_path("scenarios/" + s.name + ".json"));
        CHECK(serialize_scenario(file) == serialize_scenario(s));
    }
    CHECK_THROWS_AS(resolve_scenario("no_such_scenario"), std::exception);
}

TEST_CASE("scenario: invalid scenarios are rejected") {
    auto s = corridor_scenario();
    s.stand = {7.0, 0.0};
    CHECK_THROWS_AS(s.validate(), ScenarioError);
    s = corridor_scenario();
    std::reverse(s.visitor_waypoints.begin(), s.visitor_waypoints.end());
    CHECK_THROWS_AS(s.validate(), ScenarioError);
    CHECK_THROWS_AS(parse_scenario("{not json"), ScenarioError);
}

TEST_CASE("simulator: the visitor follows its path and diverges toward the stand") {
    Simulator sim(corridor_scenario());
    const auto start = sim.state();
    CHECK(start.time == 0.0);
    CHECK(start.agent.position == corridor_scenario().agent_position);
    double min_d = interaction_distance(start);
    double max_d = min_d;
    int steps = 0;
    while (!sim.exhausted()) {
        sim.step({}, 0.02);
        min_d = std::min(min_d, interaction_distance(sim.state()));
        max_d = std::max(max_d, interaction_distance(sim.state()));
        CHECK(sim.state().agent.position == start.agent.position);  // all-stop
        ++steps;
        REQUIRE(steps < 10000);
    }
    CHECK(max_d > 5.4);
    CHECK(min_d < 2.4);
    CHECK(sim.state().time == doctest::Approx(steps * 0.02));
    sim.reset();
    CHECK(sim.state() == start);
}

TEST_CASE("simulator: seeds are reproducible") {
    auto s = corridor_scenario();
    s.heading_noise = 0.05;
    Simulator a(s, 42), b(s, 42), c(s, 43);
    for (int i = 0; i < 200; ++i) {
        a.step({}, 0.02);
        b.step({}, 0.02);
        c.step({}, 0.02);
    }
    CHECK(a.state() == b.state());
    CHECK_FALSE(a.state() == c.state());
}

TEST_CASE("dataset: write and read back") {
    const auto data = synth_demo(load_pepper_script("demonstrator1.pf"), corridor_scenario(), 0, 50.0);
    REQUIRE(data.size() > 100);
    CHECK(data.dt == doctest::Approx(0.02));
    CHECK_NOTHROW(data.check_uniform());
    std::stringstream io;
    write_dataset(data, io);
    const auto back = read_dataset(io);
    REQUIRE(back.size() == data.size());
    CHECK(back.dt == doctest::Approx(data.dt));
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(back[i].time == doctest::Approx(data[i].time));
        CHECK(back[i].agent.position.x == doctest::Approx(data[i].agent.position.x));
        CHECK(back[i].visitor.position.y == doctest::Approx(data[i].visitor.position.y));
        CHECK(back[i].agent.arm.mode == data[i].agent.arm.mode);
        CHECK(back.samples[i].labels == data.samples[i].labels);
    }
    test::TempDir dir;
    save_dataset(data, dir / "d.jsonl");
    CHECK(load_dataset(dir / "d.jsonl").size() == data.size());
}

TEST_CASE("dataset: malformed input") {
    std::istringstream bad("{\"t\": 0}\nnot json\n");
    CHECK_THROWS_AS(read_dataset(bad), DatasetError);
    Dataset uneven;
    uneven.samples.resize(3);
    uneven.samples[1].world.time = 0.02;
    uneven.samples[2].world.time = 0.05;
    CHECK_THROWS_AS(uneven.check_uniform(), DatasetError);
}

TEST_CASE("synth: labels match the demonstrated branches") {
    const auto data = synth_demo(load_pepper_script("demonstrator1.pf"), corridor_scenario(), 0, 50.0);
    bool saw_far = false, saw_near = false;
    for (const auto& s : data.samples) {
        const auto has = [&](const std::string& id) {
            return std::find(s.labels.begin(), s.labels.end(), id) != s.labels.end();
        };
        if (has("waving")) saw_far = true;
        if (has("point_toward@stand")) saw_near = true;
        CHECK_FALSE((has("waving") && has("point_toward@stand")));
    }
    CHECK(saw_far);
    CHECK(saw_near);
    CHECK(data.size() <= static_cast<std::size_t>(max_demo_seconds * 50.0) + 1);
    const auto again = synth_demo(load_pepper_script("demonstrator1.pf"), corridor_scenario(), 0, 50.0);
    CHECK(again == data);
}
