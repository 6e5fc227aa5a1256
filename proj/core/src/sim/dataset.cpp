#include "reflex/sim/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "detail/json_codec.hpp"

namespace reflex::sim {
using nlohmann::json;

void Dataset::check_uniform(double tolerance) const {
    if (!(dt > 0.0)) throw DatasetError("dataset time step must be positive");
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double step = samples[i].world.time - samples[i - 1].world.time;
        if (std::abs(step - dt) > tolerance) {
            throw DatasetError("non-uniform time step at sample " + std::to_string(i));
        }
    }
}

std::string world_record(const WorldState& w, const std::vector<std::string>* labels) {
    json j = detail::world_json(w);
    if (labels) j["labels"] = *labels;
    return j.dump();
}

void write_dataset(const Dataset& dataset, std::ostream& out) {
    for (const Sample& s : dataset.samples) {
        out << world_record(s.world, &s.labels) << '\n';
    }
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DatasetError("cannot write dataset file " + path.string());
    write_dataset(dataset, out);
}

Dataset read_dataset(std::istream& in) {
    Dataset d;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Sample s;
        try {
            const json j = json::parse(line);
            s.world = detail::read_world(j);
            if (j.contains("labels")) s.labels = j["labels"].get<std::vector<std::string>>();
        } catch (const std::exception& e) {
            throw DatasetError("dataset line " + std::to_string(line_no) + ": " + e.what());
        }
        d.samples.push_back(std::move(s));
    }
    if (d.samples.size() >= 2) {
        d.dt = d.samples[1].world.time - d.samples[0].world.time;
    }
    for (std::size_t i = 1; i < d.samples.size(); ++i) {
        WorldState& cur = d.samples[i].world;
        const WorldState& prev = d.samples[i - 1].world;
        const double h = cur.time - prev.time;
        if (h <= 0.0) continue;
        cur.agent.linear_velocity = (cur.agent.position - prev.agent.position) * (1.0 / h);
        cur.agent.body_yaw_rate = wrap_angle(cur.agent.body_yaw - prev.agent.body_yaw) / h;
        cur.visitor.velocity = (cur.visitor.position - prev.visitor.position) * (1.0 / h);
    }
    return d;
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open dataset file " + path.string());
    return read_dataset(in);
}

}  // namespace reflex::sim
