#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace reflex::learn {

/// Row-major T x S matrix of log-emissions.
struct EmissionMatrix {
    std::size_t steps = 0;
    std::size_t states = 0;
    std::vector<double> values;

    EmissionMatrix() = default;
    EmissionMatrix(std::size_t t, std::size_t s) : steps(t), states(s), values(t * s, 0.0) {}
    double& at(std::size_t t, std::size_t s) { return values[t * states + s]; }
    double at(std::size_t t, std::size_t s) const { return values[t * states + s]; }
};

/// Most likely state sequence. Among equally likely sequences the
/// lexicographically smallest one is returned. `log_transition` is S x S
/// row-major (from, to); empty spans mean uniform.
std::vector<int> viterbi(const EmissionMatrix& emissions, std::span<const double> log_initial = {},
                         std::span<const double> log_transition = {});

}  // namespace reflex::learn
