#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace hybridsim {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. Rows are the natural unit here: a
/// sentence is a matrix whose row n is the vector of token n.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) {
        assert(r < rows && c < cols);
        return data[r * cols + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        assert(r < rows && c < cols);
        return data[r * cols + c];
    }

    std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

    bool empty() const noexcept { return rows == 0; }

    static Matrix from_rows(const std::vector<Vector>& rows_in) {
        Matrix m;
        m.rows = rows_in.size();
        m.cols = rows_in.empty() ? 0 : rows_in.front().size();
        m.data.reserve(m.rows * m.cols);
        for (const auto& r : rows_in) {
            assert(r.size() == m.cols);
            m.data.insert(m.data.end(), r.begin(), r.end());
        }
        return m;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// y += M x
inline void gemv_acc(const Matrix& m, std::span<const double> x, std::span<double> y) {
    assert(m.cols == x.size() && m.rows == y.size());
    for (std::size_t r = 0; r < m.rows; ++r) y[r] += dot(m.row(r), x);
}

// y += M^T x
inline void gemv_t_acc(const Matrix& m, std::span<const double> x, std::span<double> y) {
    assert(m.rows == x.size() && m.cols == y.size());
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double xr = x[r];
        if (xr == 0.0) continue;
        auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols; ++c) y[c] += row[c] * xr;
    }
}

// M += a b^T
inline void outer_acc(Matrix& m, std::span<const double> a, std::span<const double> b) {
    assert(m.rows == a.size() && m.cols == b.size());
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double ar = a[r];
        if (ar == 0.0) continue;
        auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols; ++c) row[c] += ar * b[c];
    }
}

} // namespace detail
} // namespace hybridsim
