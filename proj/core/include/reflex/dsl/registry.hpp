#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reflex::dsl {

struct MotorSpec {
    std::string name;
    std::string resource;
    bool targeting = false;
};

struct SensorSpec {
    std::string name;
    std::vector<std::string> targets;  ///< targets this sensor keeps updated
};

/// A numeric feature usable in distance evaluations, with the targets it reads.
struct FeatureSpec {
    std::string name;
    std::vector<std::string> targets;
};

/// A motor primitive bound to a target, or a lone non-targeting primitive.
struct Association {
    std::string primitive;
    std::optional<std::string> target;

    /// `primitive@target`, or just `primitive`.
    std::string id() const;
    static Association from_id(std::string_view id);

    friend bool operator==(const Association&, const Association&) = default;
    friend auto operator<=>(const Association&, const Association&) = default;
};

/// Program-supplied catalogue of primitives, targets and evaluations.
class PrimitiveRegistry {
public:
    std::vector<MotorSpec> motors;
    std::vector<SensorSpec> sensors;
    std::vector<std::string> targets;
    std::vector<std::string> evaluations;
    std::vector<FeatureSpec> features;

    const MotorSpec* find_motor(std::string_view name) const;
    const SensorSpec* find_sensor(std::string_view name) const;
    const FeatureSpec* find_feature(std::string_view name) const;
    bool has_target(std::string_view name) const;
    bool has_evaluation(std::string_view name) const;
    /// Sensor that keeps `target` updated, if any.
    const SensorSpec* sensor_for(std::string_view target) const;

    /// Resources in first-declared order.
    std::vector<std::string> resources() const;
    std::string resource_of(const Association& a) const;

    /// Every (targeting primitive x target) plus every non-targeting
    /// primitive, in registry order.
    std::vector<Association> association_universe() const;

    /// Throws std::invalid_argument on duplicate names or dangling targets.
    void check() const;
};

PrimitiveRegistry parse_registry(std::string_view json_text);
std::string serialize_registry(const PrimitiveRegistry& registry);
PrimitiveRegistry load_registry(const std::filesystem::path& path);

}  // namespace reflex::dsl
