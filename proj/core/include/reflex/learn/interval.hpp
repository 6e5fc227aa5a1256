#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>

namespace reflex::learn {

class InsufficientSupport : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Open interval over the interaction distance; either end may be infinite.
struct Interval {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();

    bool contains(double v) const { return lower < v && v < upper; }
    bool lower_bounded() const { return lower > -std::numeric_limits<double>::infinity(); }
    bool upper_bounded() const { return upper < std::numeric_limits<double>::infinity(); }

    friend bool operator==(const Interval&, const Interval&) = default;
};

struct IntervalFitParams {
    double margin = 0.05;  ///< widening on each finite side, m
    int min_support = 25;  ///< active samples required
    double snap = 0.1;     ///< endpoints this close to the data range become infinite
};

/// Interval classifier: the hull of the feature over active samples, widened
/// by the margin, with ends near the global extremes of the feature opened to
/// infinity. Throws InsufficientSupport below min_support active samples.
Interval fit_evaluation(std::span<const double> feature, std::span<const std::uint8_t> active,
                        const IntervalFitParams& params = {});

}  // namespace reflex::learn
