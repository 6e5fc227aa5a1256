#include "reflex/session/protocol.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "detail/json_codec.hpp"
#include "reflex/dsl/parser.hpp"
#include "reflex/dsl/validate.hpp"

namespace reflex::session {
namespace {

using nlohmann::json;

std::string ack(std::string_view type, json extra = json::object()) {
    extra["type"] = type;
    extra["ok"] = true;
    return extra.dump();
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SessionError("cannot read " + path.filename().string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ControlInput read_input(const json& j) {
    ControlInput in;
    if (j.contains("drive")) {
        const json& d = j["drive"];
        if (!d.is_array() || d.size() != 2) throw SessionError("drive must be a two-element array");
        in.drive = {d[0].get<double>(), d[1].get<double>()};
    }
    in.turn = j.value("turn", 0.0);
    in.head = j.value("head", 0.0);
    in.arm = arm_request_from_string(j.value("arm", std::string("none")));
    return in;
}

}  // namespace

std::string tick_message(const TickSnapshot& s) {
    json j{{"type", "tick"},
           {"tick", s.tick},
           {"t", s.world.time},
           {"mode", to_string(s.mode)},
           {"d", sim::interaction_distance(s.world)},
           {"world", detail::world_json(s.world)},
           {"active", s.active_leaves},
           {"branches", s.active_branches},
           {"commands", detail::commands_json(s.commands)}};
    return j.dump();
}

std::string error_message(std::string_view request, std::string_view message,
                          const std::vector<std::string>& diagnostics) {
    json j{{"type", "error"}, {"request", request}, {"message", message}};
    if (!diagnostics.empty()) j["diagnostics"] = diagnostics;
    return j.dump();
}

bool valid_file_name(std::string_view name) {
    return !name.empty() && name.front() != '.' && name.find('/') == std::string_view::npos &&
           name.find('\\') == std::string_view::npos && name.size() <= 255;
}

ProtocolHandler::ProtocolHandler(ServiceConfig config) : config_(std::move(config)) {}

std::filesystem::path ProtocolHandler::file_path(const std::string& name) const {
    if (!valid_file_name(name)) throw SessionError("invalid file name '" + name + "'");
    return config_.files_dir / name;
}

std::string ProtocolHandler::start(std::string_view scenario, double hz, std::optional<std::uint64_t> seed) {
    auto next = std::make_unique<Session>(sim::resolve_scenario(scenario), hz, seed);
    // Tick indices keep increasing across sessions.
    if (session_) tick_offset_ += session_->tick_index();
    session_ = std::move(next);
    session_id_ = "s" + std::to_string(++sessions_started_);
    return ack("start", {{"session", session_id_},
                         {"scenario", session_->scenario().name},
                         {"hz", session_->hz()},
                         {"world", detail::world_json(session_->world())}});
}

std::string ProtocolHandler::save_recording(const sim::Dataset& dataset, const std::string& file, bool automatic) {
    sim::save_dataset(dataset, file_path(file));
    return ack("record_stop", {{"file", file}, {"samples", dataset.size()}, {"auto", automatic}});
}

std::string ProtocolHandler::handle(std::string_view message) {
    std::string type;
    try {
        const json j = json::parse(message);
        if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
            return error_message("", "message needs a string 'type' field");
        }
        type = j["type"].get<std::string>();

        if (type == "hello") {
            return ack("hello", {{"protocol", protocol_version},
                                 {"server", "reflex"},
                                 {"hz", config_.hz},
                                 {"broadcast_hz", config_.broadcast_hz},
                                 {"session", session_ ? json(session_id_) : json(nullptr)}});
        }
        if (type == "start") {
            if (session_ && session_->mode() != Mode::idle) {
                return error_message(type, "session is busy in mode " + std::string(to_string(session_->mode())));
            }
            std::optional<std::uint64_t> seed;
            if (j.contains("seed") && !j["seed"].is_null()) seed = j["seed"].get<std::uint64_t>();
            return start(j.value("scenario", config_.scenario), j.value("hz", config_.hz), seed);
        }
        if (!session_) return error_message(type, "no session; send 'start' first");

        if (type == "input") {
            session_->apply_input(read_input(j));
            return ack(type);
        }
        if (type == "record_start") {
            const std::string file = j.value("file", std::string("demo.jsonl"));
            file_path(file);
            session_->start_recording();
            recording_file_ = file;
            return ack(type, {{"file", file}});
        }
        if (type == "record_stop") {
            const std::string file = j.value("file", recording_file_);
            return save_recording(session_->finish_recording(), file, false);
        }
        if (type == "load_script") {
            std::string text;
            if (j.contains("text")) {
                text = j["text"].get<std::string>();
            } else if (j.contains("file")) {
                text = read_file(file_path(j["file"].get<std::string>()));
            } else {
                return error_message(type, "load_script needs 'text' or 'file'");
            }
            session_->load_script(text);
            return ack(type);
        }
        if (type == "run") {
            if (j.contains("dataset")) {
                session_->start_replay(sim::load_dataset(file_path(j["dataset"].get<std::string>())));
            } else {
                session_->run_script();
            }
            return ack(type, {{"mode", to_string(session_->mode())}});
        }
        if (type == "stop") {
            session_->stop();
            return ack(type, {{"mode", to_string(session_->mode())}});
        }
        return error_message(type, "unknown message type '" + type + "'");
    } catch (const dsl::ValidationError& e) {
        std::vector<std::string> diagnostics;
        for (const auto& d : e.diagnostics) diagnostics.push_back(d.to_string());
        return error_message(type, "script does not validate", diagnostics);
    } catch (const dsl::ParseError& e) {
        return error_message(type, "script does not parse", {e.what()});
    } catch (const json::exception& e) {
        return error_message(type, std::string("malformed message: ") + e.what());
    } catch (const std::exception& e) {
        return error_message(type, e.what());
    }
}

ProtocolHandler::TickOutput ProtocolHandler::tick() {
    TickOutput out;
    if (!ticking()) return out;
    out.snapshot = session_->step();
    if (out.snapshot) out.snapshot->tick += tick_offset_;
    if (auto recording = session_->take_auto_recording()) {
        try {
            out.events.push_back(save_recording(*recording, recording_file_, true));
        } catch (const std::exception& e) {
            out.events.push_back(error_message("record_stop", e.what()));
        }
    }
    return out;
}

}  // namespace reflex::session
