#include "reflex/learn/viterbi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace reflex::learn {
namespace {

bool near_best(double value, double best) {
    return value >= best - 1e-9 * (1.0 + std::abs(best));
}

}  // namespace

// Backward pass for the best suffix score of every (step, state), then a
// forward pass that takes the smallest state still on an optimal path.
std::vector<int> viterbi(const EmissionMatrix& emissions, std::span<const double> log_initial,
                         std::span<const double> log_transition) {
    const std::size_t steps = emissions.steps;
    const std::size_t states = emissions.states;
    if (steps == 0) return {};
    if (states == 0) throw std::invalid_argument("viterbi needs at least one state");
    if (emissions.values.size() != steps * states) throw std::invalid_argument("emission matrix size mismatch");
    if (!log_initial.empty() && log_initial.size() != states) throw std::invalid_argument("initial size mismatch");
    if (!log_transition.empty() && log_transition.size() != states * states) {
        throw std::invalid_argument("transition size mismatch");
    }

    const double uniform = -std::log(static_cast<double>(states));
    auto initial = [&](std::size_t s) { return log_initial.empty() ? uniform : log_initial[s]; };
    auto transition = [&](std::size_t from, std::size_t to) {
        return log_transition.empty() ? uniform : log_transition[from * states + to];
    };

    std::vector<double> beta(steps * states);
    for (std::size_t s = 0; s < states; ++s) beta[(steps - 1) * states + s] = emissions.at(steps - 1, s);
    for (std::size_t t = steps - 1; t-- > 0;) {
        for (std::size_t s = 0; s < states; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t n = 0; n < states; ++n) {
                best = std::max(best, transition(s, n) + beta[(t + 1) * states + n]);
            }
            beta[t * states + s] = emissions.at(t, s) + best;
        }
    }

    auto pick = [&](auto&& score) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < states; ++s) best = std::max(best, score(s));
        for (std::size_t s = 0; s < states; ++s) {
            if (near_best(score(s), best)) return static_cast<int>(s);
        }
        return 0;
    };

    std::vector<int> path(steps);
    path[0] = pick([&](std::size_t s) { return initial(s) + beta[s]; });
    for (std::size_t t = 1; t < steps; ++t) {
        const auto from = static_cast<std::size_t>(path[t - 1]);
        path[t] = pick([&](std::size_t s) { return transition(from, s) + beta[t * states + s]; });
    }
    return path;
}

}  // namespace reflex::learn
