#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "reflex/dsl/registry.hpp"
#include "reflex/sim/world.hpp"

namespace reflex::learn {

using TransitionFeature = std::function<double(const sim::WorldState& prev, const sim::WorldState& cur)>;

/// Observation model of one target-primitive association.
///
/// `feature` reads the transition prev -> cur. `predicted` is the same feature
/// evaluated on the state the agent would have reached had this association
/// driven its resource from `prev`.
struct InverseModel {
    dsl::Association association;
    std::string resource;
    TransitionFeature feature;
    TransitionFeature predicted;
    double sigma = 1.0;
};

/// Association models plus one rest (zero-command) model per resource.
struct InverseModelSet {
    std::vector<InverseModel> associations;
    std::map<std::string, InverseModel> rest;

    std::vector<InverseModel> for_resource(const std::string& resource) const;
};

/// Log-likelihood of the transition under the model, dropping the constant
/// shared by all states: -(r / scale)^2 / (2 sigma^2) with r the residual
/// between predicted and observed feature and `scale` the feature's
/// normalization.
double emission_loglik(const InverseModel& model, const sim::WorldState& prev, const sim::WorldState& cur,
                       double scale = 1.0);

/// Inverse models for the wheeled humanoid primitives, built on the same
/// motor model the simulator runs. `dt` is the dataset time step.
InverseModelSet pepper_inverse_models(const dsl::PrimitiveRegistry& registry, const sim::AgentParams& params,
                                      const sim::Bounds& bounds, double dt);

}  // namespace reflex::learn
