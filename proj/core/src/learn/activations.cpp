#include "reflex/learn/activations.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

namespace reflex::learn {
namespace {

/// Standard deviation of the observed feature over the dataset; features that
/// never vary are left in their own units.
double feature_scale(const sim::Dataset& dataset, const InverseModel& model) {
    const std::size_t n = dataset.size() - 1;
    double mean = 0.0;
    std::vector<double> values(n);
    for (std::size_t t = 0; t < n; ++t) {
        values[t] = model.feature(dataset[t], dataset[t + 1]);
        mean += values[t];
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    return sd > 1e-12 ? sd : 1.0;
}

}  // namespace

std::vector<std::uint8_t> ActivationMatrix::activation(const dsl::Association& association) const {
    std::vector<std::uint8_t> out(length, 0);
    for (const auto& r : resources) {
        for (std::size_t k = 0; k < r.states.size(); ++k) {
            if (r.states[k] != association) continue;
            const int state = static_cast<int>(k) + 1;
            for (std::size_t s = 0; s < length; ++s) out[s] = r.path[s] == state ? 1 : 0;
            return out;
        }
    }
    return out;
}

std::vector<dsl::Association> ActivationMatrix::associations() const {
    std::vector<dsl::Association> out;
    for (const auto& r : resources) out.insert(out.end(), r.states.begin(), r.states.end());
    return out;
}

std::optional<std::string> ActivationMatrix::resource_of(const dsl::Association& association) const {
    for (const auto& r : resources) {
        if (std::find(r.states.begin(), r.states.end(), association) != r.states.end()) return r.resource;
    }
    return std::nullopt;
}

EmissionMatrix resource_emissions(const sim::Dataset& dataset, const std::vector<InverseModel>& models,
                                  const InverseModel* rest, const DecodeParams& params) {
    if (dataset.size() < 2) throw std::invalid_argument("dataset needs at least two samples");
    const std::size_t steps = dataset.size() - 1;
    EmissionMatrix e(steps, models.size() + 1);

    std::vector<InverseModel> tuned = models;
    std::vector<double> scales;
    for (auto& m : tuned) {
        if (auto it = params.sigma.find(m.association.id()); it != params.sigma.end()) m.sigma = it->second;
        if (!(m.sigma > 0.0)) throw std::invalid_argument("sigma of " + m.association.id() + " must be positive");
        scales.push_back(feature_scale(dataset, m));
    }
    const double rest_scale = rest ? feature_scale(dataset, *rest) : 1.0;

    for (std::size_t t = 0; t < steps; ++t) {
        const auto& prev = dataset[t];
        const auto& cur = dataset[t + 1];
        double idle = params.lambda_idle;
        if (rest) idle = std::max(idle, emission_loglik(*rest, prev, cur, rest_scale));
        e.at(t, 0) = idle;
        for (std::size_t k = 0; k < tuned.size(); ++k) {
            e.at(t, k + 1) = emission_loglik(tuned[k], prev, cur, scales[k]) - std::log(tuned[k].sigma);
        }
    }
    return e;
}

std::vector<int> decode_resource(const sim::Dataset& dataset, const std::vector<InverseModel>& models,
                                 double lambda_idle, const InverseModel* rest) {
    DecodeParams params;
    params.lambda_idle = lambda_idle;
    return viterbi(resource_emissions(dataset, models, rest, params));
}

ActivationMatrix detect_activations(const sim::Dataset& dataset, const dsl::PrimitiveRegistry& registry,
                                    const InverseModelSet& models, const DecodeParams& params) {
    if (dataset.size() < 2) throw std::invalid_argument("dataset needs at least two samples");
    ActivationMatrix out;
    out.length = dataset.size() - 1;

    std::vector<std::future<ResourcePath>> jobs;
    for (const auto& resource : registry.resources()) {
        jobs.push_back(std::async(std::launch::async, [&, resource] {
            ResourcePath r;
            r.resource = resource;
            const auto resource_models = models.for_resource(resource);
            for (const auto& m : resource_models) r.states.push_back(m.association);
            const auto it = models.rest.find(resource);
            const InverseModel* rest = it == models.rest.end() ? nullptr : &it->second;
            r.path = viterbi(resource_emissions(dataset, resource_models, rest, params));
            return r;
        }));
    }
    for (auto& job : jobs) out.resources.push_back(job.get());
    return out;
}

}  // namespace reflex::learn
