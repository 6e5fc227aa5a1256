#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "reflex/sim/world.hpp"

namespace reflex::sim {

class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One recorded world state, optionally with the association identifiers
/// that were active when it was recorded (ground truth from simulation).
struct Sample {
    WorldState world;
    std::vector<std::string> labels;

    friend bool operator==(const Sample&, const Sample&) = default;
};

/// Time-indexed world states at a uniform step.
struct Dataset {
    double dt = 0.02;
    std::vector<Sample> samples;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    const WorldState& operator[](std::size_t i) const { return samples[i].world; }

    /// Throws DatasetError unless the time step is uniform and positive.
    void check_uniform(double tolerance = 1e-6) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Serializes one world state (plus labels) as a single-line JSON record.
std::string world_record(const WorldState& world, const std::vector<std::string>* labels = nullptr);

void write_dataset(const Dataset& dataset, std::ostream& out);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

/// Reads line-delimited records. Velocities are not stored in the file and are
/// recovered by backward differences.
Dataset read_dataset(std::istream& in);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace reflex::sim
