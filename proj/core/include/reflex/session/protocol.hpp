#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reflex/session/session.hpp"

namespace reflex::session {

inline constexpr int protocol_version = 1;

struct ServiceConfig {
    std::string scenario = "corridor";  ///< built-in name or scenario file
    double hz = 50.0;
    double broadcast_hz = 20.0;
    std::filesystem::path files_dir = ".";
    double speed = 1.0;              ///< simulated seconds per wall-clock second
    std::size_t queue_limit = 64;    ///< tick frames buffered per client
};

/// `tick` message for one snapshot.
std::string tick_message(const TickSnapshot& snapshot);

/// `error` message answering a request of type `request` (may be empty).
std::string error_message(std::string_view request, std::string_view message,
                          const std::vector<std::string>& diagnostics = {});

/// File name accepted by the file endpoint: non-empty, no path separators,
/// no leading dot.
bool valid_file_name(std::string_view name);

/// Applies wire messages to the session it owns. Not thread-safe; the host
/// calls it from its ticking thread only.
class ProtocolHandler {
public:
    explicit ProtocolHandler(ServiceConfig config);

    const ServiceConfig& config() const { return config_; }
    Session* session() { return session_.get(); }

    /// Reply to one client message (an ack echoing its type, or an error).
    std::string handle(std::string_view message);

    struct TickOutput {
        std::optional<TickSnapshot> snapshot;
        std::vector<std::string> events;  ///< messages for every client
    };
    /// Advances the session one tick if it is not idle.
    TickOutput tick();
    bool ticking() const { return session_ && session_->mode() != Mode::idle; }

private:
    std::string start(std::string_view scenario, double hz, std::optional<std::uint64_t> seed);
    std::string save_recording(const sim::Dataset& dataset, const std::string& file, bool automatic);
    std::filesystem::path file_path(const std::string& name) const;

    ServiceConfig config_;
    std::unique_ptr<Session> session_;
    int sessions_started_ = 0;
    std::int64_t tick_offset_ = 0;
    std::string session_id_;
    std::string recording_file_;
};

}  // namespace reflex::session
