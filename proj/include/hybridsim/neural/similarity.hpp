#pragma once

#include <cmath>
#include <span>
#include <string>

#include "hybridsim/error.hpp"
#include "hybridsim/matrix.hpp"
#include "hybridsim/neural/common.hpp"

namespace hybridsim::neural {

/// exp(-||a - b||_1), in (0, 1].
inline double manhattan_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorKind::shape, "manhattan similarity of vectors with different dims");
    double dist = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dist += std::abs(a[i] - b[i]);
    return std::exp(-dist);
}

/// Mean over capsules (rows) of the per-capsule Manhattan similarity.
inline double capsule_similarity(const Matrix& left, const Matrix& right) {
    if (left.rows != right.rows || left.cols != right.cols)
        throw Error(ErrorKind::shape, "capsule matrices differ in shape");
    if (left.rows == 0) throw Error(ErrorKind::empty_input, "capsule matrix has no capsules");
    double sum = 0.0;
    for (std::size_t c = 0; c < left.rows; ++c) sum += manhattan_similarity(left.row(c), right.row(c));
    return sum / static_cast<double>(left.rows);
}

/// Sigmoid regression head over a pooled sentence-pair vector.
struct DenseHead {
    Vector w;
    double b = 0.0;

    static constexpr std::size_t default_width = 768;

    std::size_t input_dim() const noexcept { return w.size(); }
};

inline double dense_sigmoid(const DenseHead& head, std::span<const double> pooled) {
    if (pooled.size() != head.input_dim())
        throw Error(ErrorKind::shape, "pooled vector has dim " + std::to_string(pooled.size()) + ", head expects " +
                                          std::to_string(head.input_dim()));
    return sigmoid(detail::dot(head.w, pooled) + head.b);
}

/// Squared error of the head against `gold`, with its gradient accumulated into `grad`.
inline double dense_loss_and_gradient(const DenseHead& head, std::span<const double> pooled, double gold,
                                      DenseHead& grad) {
    const double s = dense_sigmoid(head, pooled);
    const double ds = 2.0 * (s - gold);
    const double da = ds * s * (1.0 - s);
    for (std::size_t i = 0; i < pooled.size(); ++i) grad.w[i] += da * pooled[i];
    grad.b += da;
    return (s - gold) * (s - gold);
}

} // namespace hybridsim::neural
