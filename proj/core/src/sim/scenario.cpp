#include "reflex/sim/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace reflex::sim {
namespace {

using nlohmann::json;

Vec2 read_vec(const json& j) { return {j.at("x").get<double>(), j.at("y").get<double>()}; }
json write_vec(Vec2 v) { return json{{"x", v.x}, {"y", v.y}}; }

}  // namespace

void Scenario::validate() const {
    if (!(corridor.length > 0.0) || !(corridor.width > 0.0)) {
        throw ScenarioError("corridor dimensions must be positive");
    }
    if (visitor_waypoints.size() < 2) {
        throw ScenarioError("visitor path needs at least two waypoints");
    }
    for (std::size_t i = 1; i < visitor_waypoints.size(); ++i) {
        if (!(visitor_waypoints[i].time > visitor_waypoints[i - 1].time)) {
            throw ScenarioError("waypoint times must be strictly increasing");
        }
    }
    auto inside = [&](Vec2 p, const char* what) {
        if (!corridor.contains(p)) throw ScenarioError(std::string(what) + " lies outside the corridor");
    };
    inside(stand, "stand");
    inside(front_of_stand, "front_of_stand");
    inside(agent_position, "agent start");
    for (const auto& w : visitor_waypoints) inside(w.position, "visitor waypoint");
    if (heading_noise < 0.0) throw ScenarioError("heading noise must be non-negative");
    if (stop_radius && *stop_radius < 0.0) throw ScenarioError("stop radius must be non-negative");
    if (!(params.v_max > 0.0) || !(params.omega_max > 0.0) || !(params.head_limit > 0.0) ||
        !(params.head_rate_max > 0.0) || params.d_safe < 0.0) {
        throw ScenarioError("agent limits must be positive");
    }
}

double Scenario::duration() const {
    return visitor_waypoints.empty() ? 0.0 : visitor_waypoints.back().time;
}

Scenario parse_scenario(std::string_view json_text) {
    Scenario s;
    try {
        const json j = json::parse(json_text);
        s.name = j.value("name", s.name);
        if (j.contains("corridor")) {
            s.corridor.length = j["corridor"].at("length").get<double>();
            s.corridor.width = j["corridor"].at("width").get<double>();
        }
        s.stand = read_vec(j.at("stand"));
        s.front_of_stand = read_vec(j.at("front_of_stand"));
        const json& agent = j.at("agent");
        s.agent_position = read_vec(agent);
        s.agent_body_yaw = agent.value("body_yaw", 0.0);
        s.agent_head_yaw = agent.value("head_yaw", 0.0);
        for (const json& w : j.at("visitor").at("waypoints")) {
            s.visitor_waypoints.push_back({w.at("t").get<double>(), read_vec(w)});
        }
        if (j.contains("noise")) {
            s.seed = j["noise"].value("seed", std::uint64_t{0});
            s.heading_noise = j["noise"].value("heading_sigma", 0.0);
        }
        if (j.contains("stop_radius") && !j["stop_radius"].is_null()) {
            s.stop_radius = j["stop_radius"].get<double>();
        }
        if (j.contains("limits")) {
            const json& l = j["limits"];
            AgentParams& p = s.params;
            p.v_max = l.value("v_max", p.v_max);
            p.omega_max = l.value("omega_max", p.omega_max);
            p.d_safe = l.value("d_safe", p.d_safe);
            p.k_omega = l.value("k_omega", p.k_omega);
            p.k_v = l.value("k_v", p.k_v);
            p.head_limit = l.value("head_limit", p.head_limit);
            p.k_head = l.value("k_head", p.k_head);
            p.head_rate_max = l.value("head_rate_max", p.head_rate_max);
            p.wave_rate = l.value("wave_rate", p.wave_rate);
        }
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("malformed scenario: ") + e.what());
    }
    s.validate();
    return s;
}

std::string serialize_scenario(const Scenario& s) {
    json waypoints = json::array();
    for (const auto& w : s.visitor_waypoints) {
        waypoints.push_back({{"t", w.time}, {"x", w.position.x}, {"y", w.position.y}});
    }
    json j{
        {"name", s.name},
        {"corridor", {{"length", s.corridor.length}, {"width", s.corridor.width}}},
        {"stand", write_vec(s.stand)},
        {"front_of_stand", write_vec(s.front_of_stand)},
        {"agent",
         {{"x", s.agent_position.x},
          {"y", s.agent_position.y},
          {"body_yaw", s.agent_body_yaw},
          {"head_yaw", s.agent_head_yaw}}},
        {"visitor", {{"waypoints", waypoints}}},
        {"noise", {{"seed", s.seed}, {"heading_sigma", s.heading_noise}}},
        {"limits",
         {{"v_max", s.params.v_max},
          {"omega_max", s.params.omega_max},
          {"d_safe", s.params.d_safe},
          {"k_omega", s.params.k_omega},
          {"k_v", s.params.k_v},
          {"head_limit", s.params.head_limit},
          {"k_head", s.params.k_head},
          {"head_rate_max", s.params.head_rate_max},
          {"wave_rate", s.params.wave_rate}}},
    };
    j["stop_radius"] = s.stop_radius ? json(*s.stop_radius) : json(nullptr);
    return j.dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ScenarioError("cannot write scenario file " + path.string());
    out << serialize_scenario(scenario);
}

Scenario corridor_scenario() {
    Scenario s;
    s.name = "corridor";
    s.stand = {5.0, 0.0};
    s.front_of_stand = {4.3, 1.2};
    s.agent_position = {4.6, 0.3};
    s.agent_body_yaw = std::numbers::pi / 2.0;
    s.visitor_waypoints = {
        {0.0, {0.0, 2.7}},
        {11.0, {4.0, 2.6}},
        {17.0, {4.7, 0.6}},
    };
    s.seed = 7;
    s.heading_noise = 0.05;
    s.stop_radius = 0.7;
    return s;
}

Scenario pass_by_scenario() {
    Scenario s = corridor_scenario();
    s.name = "pass_by";
    s.visitor_waypoints = {
        {0.0, {0.0, 2.7}},
        {9.0, {3.0, 2.2}},
        {14.0, {5.0, 2.0}},
    };
    s.stop_radius.reset();
    return s;
}

Scenario approach_leave_return_scenario() {
    Scenario s = corridor_scenario();
    s.name = "approach_leave_return";
    s.visitor_waypoints = {
        {0.0, {0.0, 2.7}},
        {8.0, {3.5, 2.0}},
        {11.0, {4.2, 1.4}},
        {19.0, {1.0, 2.6}},
        {26.0, {3.8, 1.6}},
        {33.0, {0.2, 2.8}},
    };
    s.stop_radius.reset();
    return s;
}

Scenario resolve_scenario(std::string_view name_or_path) {
    if (name_or_path == "corridor") return corridor_scenario();
    if (name_or_path == "pass_by") return pass_by_scenario();
    if (name_or_path == "approach_leave_return") return approach_leave_return_scenario();
    return load_scenario(std::filesystem::path(name_or_path));
}

}  // namespace reflex::sim
