#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "hybridsim/error.hpp"

namespace hybridsim {

struct CorrelationReport {
    double pearson = 0.0;
    double spearman = 0.0;
    std::size_t n = 0;
};

namespace detail {

inline void check_pairable(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorKind::shape, "correlation inputs differ in length");
    if (x.size() < 2) throw Error(ErrorKind::undefined_correlation, "correlation needs at least 2 samples");
}

inline bool constant(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
}

inline double mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

} // namespace detail

/// Two-pass Pearson correlation, clamped to [-1, 1].
inline double pearson(std::span<const double> x, std::span<const double> y) {
    detail::check_pairable(x, y);
    // Exact test: a rounded mean leaves tiny nonzero deviations on constant input.
    if (detail::constant(x) || detail::constant(y))
        throw Error(ErrorKind::undefined_correlation, "correlation of a constant series");
    const double mx = detail::mean(x);
    const double my = detail::mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::undefined_correlation, "correlation of a constant series");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// 1-based ranks; tied values share the average of the ranks they span.
inline std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
    detail::check_pairable(x, y);
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

inline CorrelationReport correlate(std::span<const double> predicted, std::span<const double> gold) {
    return {pearson(predicted, gold), spearman(predicted, gold), predicted.size()};
}

} // namespace hybridsim
