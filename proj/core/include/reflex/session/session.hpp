#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reflex/dsl/registry.hpp"
#include "reflex/engine/engine.hpp"
#include "reflex/sim/dataset.hpp"
#include "reflex/sim/scenario.hpp"
#include "reflex/sim/simulator.hpp"

namespace reflex::session {

enum class Mode { idle, recording, running, replay };

/// Wire names: idle, demo-recording, script-running, replay.
std::string_view to_string(Mode mode);

/// Raised for requests the session cannot honour in its current state; the
/// session is left unchanged.
class SessionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ArmRequest { none, wave, point_at_stand, point_at_visitor, freeze };

std::string_view to_string(ArmRequest request);
ArmRequest arm_request_from_string(std::string_view text);

/// Teleoperation request, normalized to [-1, 1] per axis. `drive` is in the
/// agent's body frame (x forward, y left).
struct ControlInput {
    sim::Vec2 drive;
    double turn = 0.0;
    double head = 0.0;
    ArmRequest arm = ArmRequest::none;

    /// Throws SessionError when a component leaves [-1, 1].
    void validate() const;

    friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

/// Input scaled by the agent limits into motor commands for `agent`.
sim::MotorCommands scale_input(const ControlInput& input, const sim::WorldState& world,
                               const sim::AgentParams& params);

/// One completed tick: the world the tick acted on, the activations and
/// commands it produced.
struct TickSnapshot {
    std::int64_t tick = 0;  ///< session-wide, strictly increasing
    Mode mode = Mode::idle;
    sim::WorldState world;
    std::vector<std::string> active_leaves;
    std::vector<std::string> active_branches;
    sim::MotorCommands commands;
};

/// One simulated corridor with a single ticking owner.
///
/// Recording and running restart the scenario from its initial state. A run
/// or recording ends by itself when the scenario is exhausted; a recording
/// that ends this way is kept in last_recording().
class Session {
public:
    explicit Session(sim::Scenario scenario, double hz = 50.0, std::optional<std::uint64_t> seed = std::nullopt);

    Mode mode() const { return mode_; }
    double hz() const { return hz_; }
    const sim::Scenario& scenario() const { return simulator_.scenario(); }
    const sim::WorldState& world() const { return world_; }
    std::int64_t tick_index() const { return tick_; }
    const sim::Dataset& buffer() const { return buffer_; }
    const ControlInput& input() const { return input_; }
    bool has_script() const { return engine_ != nullptr; }

    void start_recording();
    void apply_input(const ControlInput& input);
    /// Seals the buffer and returns to idle. Needs at least two samples.
    sim::Dataset finish_recording();
    /// Recording sealed by the scenario trigger, if one happened since the
    /// last call.
    std::optional<sim::Dataset> take_auto_recording();

    /// Parses and validates; throws dsl::ParseError / dsl::ValidationError.
    void load_script(std::string_view text);
    void run_script();
    /// Plays a dataset back as the world; a loaded script is evaluated on it.
    void start_replay(sim::Dataset dataset);
    /// Back to idle from any mode; an unfinished recording is discarded.
    void stop();

    /// Advances one tick; a no-op returning nothing while idle.
    std::optional<TickSnapshot> step();

private:
    void require(Mode expected, std::string_view action) const;
    void restart();
    TickSnapshot snapshot(const engine::ActivationSet* activations, const sim::MotorCommands& commands) const;

    double hz_;
    Mode mode_ = Mode::idle;
    sim::Simulator simulator_;
    sim::WorldState world_;
    std::int64_t tick_ = 0;
    ControlInput input_;
    sim::Dataset buffer_;
    std::optional<sim::Dataset> auto_recording_;
    std::size_t replay_index_ = 0;
    std::unique_ptr<engine::Engine> engine_;
    engine::Memory memory_;
};

}  // namespace reflex::session
