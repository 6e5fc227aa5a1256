#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reflex/dsl/registry.hpp"
#include "reflex/learn/inverse_model.hpp"
#include "reflex/learn/viterbi.hpp"
#include "reflex/sim/dataset.hpp"

namespace reflex::learn {

/// Decoding path of one resource. Entry s is the hidden state behind the
/// transition from sample s to s+1 (the decision taken at sample s):
/// 0 is idle, k > 0 is states[k - 1].
struct ResourcePath {
    std::string resource;
    std::vector<dsl::Association> states;
    std::vector<int> path;
};

struct ActivationMatrix {
    std::size_t length = 0;  ///< number of decisions, dataset size - 1
    std::vector<ResourcePath> resources;

    /// Binary activation sequence of one association (all zero if unknown).
    std::vector<std::uint8_t> activation(const dsl::Association& association) const;
    /// Every decodable association, resource by resource.
    std::vector<dsl::Association> associations() const;
    std::optional<std::string> resource_of(const dsl::Association& association) const;
};

struct DecodeParams {
    double lambda_idle = -0.5;
    /// Per-association sigma overrides keyed by association id.
    std::map<std::string, double> sigma;
};

/// Emission matrix for one resource: idle first, then one column per model.
/// Features are normalized by their standard deviation over the dataset.
/// The idle column is max(lambda_idle, rest-model log-likelihood) when a rest
/// model is given.
EmissionMatrix resource_emissions(const sim::Dataset& dataset, const std::vector<InverseModel>& models,
                                  const InverseModel* rest, const DecodeParams& params);

/// Uniform-transition Viterbi over {idle} + models for one resource.
std::vector<int> decode_resource(const sim::Dataset& dataset, const std::vector<InverseModel>& models,
                                 double lambda_idle, const InverseModel* rest = nullptr);

/// One decode per resource, run concurrently.
ActivationMatrix detect_activations(const sim::Dataset& dataset, const dsl::PrimitiveRegistry& registry,
                                    const InverseModelSet& models, const DecodeParams& params = {});

}  // namespace reflex::learn
