#pragma once

#include <cmath>

namespace hybridsim::neural {

inline double sigmoid(double x) {
    // Split by sign so exp never overflows.
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

} // namespace hybridsim::neural
