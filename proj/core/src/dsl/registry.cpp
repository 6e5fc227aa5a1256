#include "reflex/dsl/registry.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace reflex::dsl {

std::string Association::id() const {
    return target ? primitive + "@" + *target : primitive;
}

Association Association::from_id(std::string_view id) {
    const auto at = id.find('@');
    if (at == std::string_view::npos) return {std::string(id), std::nullopt};
    return {std::string(id.substr(0, at)), std::string(id.substr(at + 1))};
}

const MotorSpec* PrimitiveRegistry::find_motor(std::string_view name) const {
    auto it = std::find_if(motors.begin(), motors.end(), [&](const MotorSpec& m) { return m.name == name; });
    return it == motors.end() ? nullptr : &*it;
}

const SensorSpec* PrimitiveRegistry::find_sensor(std::string_view name) const {
    auto it = std::find_if(sensors.begin(), sensors.end(), [&](const SensorSpec& s) { return s.name == name; });
    return it == sensors.end() ? nullptr : &*it;
}

const FeatureSpec* PrimitiveRegistry::find_feature(std::string_view name) const {
    auto it = std::find_if(features.begin(), features.end(), [&](const FeatureSpec& f) { return f.name == name; });
    return it == features.end() ? nullptr : &*it;
}

bool PrimitiveRegistry::has_target(std::string_view name) const {
    return std::find(targets.begin(), targets.end(), name) != targets.end();
}

bool PrimitiveRegistry::has_evaluation(std::string_view name) const {
    return std::find(evaluations.begin(), evaluations.end(), name) != evaluations.end();
}

const SensorSpec* PrimitiveRegistry::sensor_for(std::string_view target) const {
    for (const SensorSpec& s : sensors) {
        if (std::find(s.targets.begin(), s.targets.end(), target) != s.targets.end()) return &s;
    }
    return nullptr;
}

std::vector<std::string> PrimitiveRegistry::resources() const {
    std::vector<std::string> out;
    for (const MotorSpec& m : motors) {
        if (std::find(out.begin(), out.end(), m.resource) == out.end()) out.push_back(m.resource);
    }
    return out;
}

std::string PrimitiveRegistry::resource_of(const Association& a) const {
    const MotorSpec* m = find_motor(a.primitive);
    if (!m) throw std::invalid_argument("unknown motor primitive '" + a.primitive + "'");
    return m->resource;
}

std::vector<Association> PrimitiveRegistry::association_universe() const {
    std::vector<Association> out;
    for (const MotorSpec& m : motors) {
        if (m.targeting) {
            for (const std::string& t : targets) out.push_back({m.name, t});
        } else {
            out.push_back({m.name, std::nullopt});
        }
    }
    return out;
}

void PrimitiveRegistry::check() const {
    std::set<std::string> names;
    auto unique = [&](const std::string& n) {
        if (n.empty()) throw std::invalid_argument("registry contains an empty name");
        if (!names.insert(n).second) throw std::invalid_argument("duplicate registry name '" + n + "'");
    };
    for (const auto& m : motors) {
        unique(m.name);
        if (m.resource.empty()) throw std::invalid_argument("motor '" + m.name + "' has no resource");
    }
    for (const auto& s : sensors) unique(s.name);
    for (const auto& t : targets) unique(t);
    for (const auto& e : evaluations) unique(e);
    for (const auto& f : features) unique(f.name);
    for (const auto& s : sensors) {
        for (const auto& t : s.targets) {
            if (!has_target(t)) throw std::invalid_argument("sensor '" + s.name + "' produces unknown target '" + t + "'");
        }
    }
    for (const auto& f : features) {
        for (const auto& t : f.targets) {
            if (!has_target(t)) throw std::invalid_argument("feature '" + f.name + "' reads unknown target '" + t + "'");
        }
    }
}

PrimitiveRegistry parse_registry(std::string_view json_text) {
    using nlohmann::json;
    PrimitiveRegistry r;
    try {
        const json j = json::parse(json_text);
        for (const json& m : j.at("motors")) {
            r.motors.push_back({m.at("name").get<std::string>(), m.at("resource").get<std::string>(),
                                m.value("targeting", false)});
        }
        for (const json& s : j.value("sensors", json::array())) {
            r.sensors.push_back({s.at("name").get<std::string>(),
                                 s.value("targets", std::vector<std::string>{})});
        }
        r.targets = j.value("targets", std::vector<std::string>{});
        r.evaluations = j.value("evaluations", std::vector<std::string>{});
        for (const json& f : j.value("features", json::array())) {
            r.features.push_back({f.at("name").get<std::string>(),
                                  f.value("targets", std::vector<std::string>{})});
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed registry: ") + e.what());
    }
    r.check();
    return r;
}

std::string serialize_registry(const PrimitiveRegistry& r) {
    using nlohmann::json;
    json motors = json::array();
    for (const auto& m : r.motors) motors.push_back({{"name", m.name}, {"resource", m.resource}, {"targeting", m.targeting}});
    json sensors = json::array();
    for (const auto& s : r.sensors) sensors.push_back({{"name", s.name}, {"targets", s.targets}});
    json features = json::array();
    for (const auto& f : r.features) features.push_back({{"name", f.name}, {"targets", f.targets}});
    json j{{"motors", motors}, {"sensors", sensors}, {"targets", r.targets},
           {"evaluations", r.evaluations}, {"features", features}};
    return j.dump(2) + "\n";
}

PrimitiveRegistry load_registry(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open registry file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_registry(buffer.str());
}

}  // namespace reflex::dsl
