#include "reflex/session/session.hpp"

#include <cmath>

#include "reflex/dsl/parser.hpp"
#include "reflex/dsl/validate.hpp"
#include "reflex/sim/pepper.hpp"

namespace reflex::session {

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::idle: return "idle";
        case Mode::recording: return "demo-recording";
        case Mode::running: return "script-running";
        case Mode::replay: return "replay";
    }
    return "idle";
}

std::string_view to_string(ArmRequest request) {
    switch (request) {
        case ArmRequest::none: return "none";
        case ArmRequest::wave: return "wave";
        case ArmRequest::point_at_stand: return "point_at_stand";
        case ArmRequest::point_at_visitor: return "point_at_visitor";
        case ArmRequest::freeze: return "freeze";
    }
    return "none";
}

ArmRequest arm_request_from_string(std::string_view text) {
    for (auto r : {ArmRequest::none, ArmRequest::wave, ArmRequest::point_at_stand, ArmRequest::point_at_visitor,
                   ArmRequest::freeze}) {
        if (to_string(r) == text) return r;
    }
    throw SessionError("unknown arm request '" + std::string(text) + "'");
}

void ControlInput::validate() const {
    for (double v : {drive.x, drive.y, turn, head}) {
        if (!(std::abs(v) <= 1.0)) throw SessionError("control input components must lie in [-1, 1]");
    }
}

sim::MotorCommands scale_input(const ControlInput& input, const sim::WorldState& world,
                               const sim::AgentParams& params) {
    sim::MotorCommands c;
    const double yaw = world.agent.body_yaw;
    const sim::Vec2 body = input.drive * params.v_max;
    c.wheels_translation = sim::Vec2{body.x * std::cos(yaw) - body.y * std::sin(yaw),
                                     body.x * std::sin(yaw) + body.y * std::cos(yaw)};
    c.wheels_rotation = input.turn * params.omega_max;
    c.head = input.head * params.head_rate_max;
    using Kind = sim::ArmDirective::Kind;
    switch (input.arm) {
        case ArmRequest::none: break;
        case ArmRequest::wave: c.arm = sim::ArmDirective{Kind::wave, 0.0}; break;
        case ArmRequest::freeze: c.arm = sim::ArmDirective{Kind::freeze, 0.0}; break;
        case ArmRequest::point_at_stand:
            c.arm = sim::ArmDirective{Kind::point_at, sim::bearing(world.agent.position, world.stand)};
            break;
        case ArmRequest::point_at_visitor:
            c.arm = sim::ArmDirective{Kind::point_at, sim::bearing(world.agent.position, world.visitor.position)};
            break;
    }
    return c;
}

Session::Session(sim::Scenario scenario, double hz, std::optional<std::uint64_t> seed)
    : hz_(hz), simulator_((scenario.validate(), std::move(scenario)), seed) {
    if (!(hz > 0.0) || !std::isfinite(hz)) throw SessionError("tick frequency must be positive");
    world_ = simulator_.state();
}

void Session::require(Mode expected, std::string_view action) const {
    if (mode_ != expected) {
        throw SessionError("cannot " + std::string(action) + " in mode " + std::string(to_string(mode_)));
    }
}

void Session::restart() {
    simulator_.reset();
    world_ = simulator_.state();
    memory_ = {};
}

void Session::start_recording() {
    require(Mode::idle, "start recording");
    restart();
    input_ = {};
    buffer_ = {};
    buffer_.dt = 1.0 / hz_;
    mode_ = Mode::recording;
}

void Session::apply_input(const ControlInput& input) {
    require(Mode::recording, "apply input");
    input.validate();
    input_ = input;
}

sim::Dataset Session::finish_recording() {
    require(Mode::recording, "finish recording");
    if (buffer_.size() < 2) throw SessionError("recording needs at least two samples");
    sim::Dataset out = std::move(buffer_);
    buffer_ = {};
    mode_ = Mode::idle;
    return out;
}

std::optional<sim::Dataset> Session::take_auto_recording() {
    auto out = std::move(auto_recording_);
    auto_recording_.reset();
    return out;
}

void Session::load_script(std::string_view text) {
    if (mode_ == Mode::running) throw SessionError("cannot load a script while one is running");
    const auto registry = sim::pepper_registry();
    const auto checked = dsl::validate(dsl::parse_script(text), registry);
    engine_ = std::make_unique<engine::Engine>(engine::compile(checked), sim::pepper_bindings(scenario().params));
}

void Session::run_script() {
    require(Mode::idle, "run a script");
    if (!engine_) throw SessionError("no script loaded");
    restart();
    mode_ = Mode::running;
}

void Session::start_replay(sim::Dataset dataset) {
    require(Mode::idle, "start a replay");
    if (dataset.empty()) throw SessionError("cannot replay an empty dataset");
    memory_ = {};
    buffer_ = std::move(dataset);
    replay_index_ = 0;
    mode_ = Mode::replay;
}

void Session::stop() {
    buffer_ = {};
    input_ = {};
    mode_ = Mode::idle;
}

TickSnapshot Session::snapshot(const engine::ActivationSet* activations, const sim::MotorCommands& commands) const {
    TickSnapshot s;
    s.tick = tick_;
    s.mode = mode_;
    s.world = world_;
    s.commands = commands;
    if (activations && engine_) {
        s.active_leaves = engine_->active_labels(*activations);
        s.active_branches = engine_->active_node_paths(*activations);
    }
    return s;
}

std::optional<TickSnapshot> Session::step() {
    const double dt = 1.0 / hz_;
    switch (mode_) {
        case Mode::idle:
            return std::nullopt;
        case Mode::recording: {
            const sim::MotorCommands commands = scale_input(input_, world_, scenario().params);
            buffer_.samples.push_back({world_, {}});
            ++tick_;
            TickSnapshot s = snapshot(nullptr, commands);
            simulator_.step(commands, dt);
            world_ = simulator_.state();
            if (simulator_.exhausted()) {
                if (buffer_.size() >= 2) auto_recording_ = std::move(buffer_);
                buffer_ = {};
                mode_ = Mode::idle;
                s.mode = mode_;
            }
            return s;
        }
        case Mode::running: {
            auto result = engine_->tick(world_, std::move(memory_));
            memory_ = std::move(result.memory);
            // Activations describe the world the decision was taken in.
            ++tick_;
            TickSnapshot s = snapshot(&result.activations, result.commands);
            simulator_.step(result.commands, dt);
            world_ = simulator_.state();
            if (simulator_.exhausted()) {
                mode_ = Mode::idle;
                s.mode = mode_;
            }
            return s;
        }
        case Mode::replay: {
            world_ = buffer_[replay_index_++];
            ++tick_;
            TickSnapshot s;
            if (engine_) {
                auto result = engine_->tick(world_, std::move(memory_));
                memory_ = std::move(result.memory);
                s = snapshot(&result.activations, result.commands);
            } else {
                s = snapshot(nullptr, {});
            }
            if (replay_index_ >= buffer_.size()) {
                buffer_ = {};
                mode_ = Mode::idle;
                s.mode = mode_;
            }
            return s;
        }
    }
    return std::nullopt;
}

}  // namespace reflex::session
