#include "reflex/learn/interval.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace reflex::learn {

Interval fit_evaluation(std::span<const double> feature, std::span<const std::uint8_t> active,
                        const IntervalFitParams& params) {
    if (feature.size() != active.size()) throw std::invalid_argument("feature and activation lengths differ");
    constexpr double inf = std::numeric_limits<double>::infinity();
    double lo = inf, hi = -inf;
    double global_lo = inf, global_hi = -inf;
    int support = 0;
    for (std::size_t i = 0; i < feature.size(); ++i) {
        global_lo = std::min(global_lo, feature[i]);
        global_hi = std::max(global_hi, feature[i]);
        if (!active[i]) continue;
        ++support;
        lo = std::min(lo, feature[i]);
        hi = std::max(hi, feature[i]);
    }
    if (support < params.min_support) {
        throw InsufficientSupport(std::to_string(support) + " active samples, need " +
                                  std::to_string(params.min_support));
    }
    Interval out;
    out.lower = lo - global_lo <= params.snap ? -inf : lo - params.margin;
    out.upper = global_hi - hi <= params.snap ? inf : hi + params.margin;
    return out;
}

}  // namespace reflex::learn
