#pragma once

#include <sstream>
#include <string>

#include "hybridsim/matrix.hpp"
#include "hybridsim/random.hpp"
#include "oracles.hpp"

namespace testutil {

inline oracle::Mat to_rows(const hybridsim::Matrix& m) {
    oracle::Mat out;
    for (std::size_t r = 0; r < m.rows; ++r) out.emplace_back(m.row(r).begin(), m.row(r).end());
    return out;
}

inline hybridsim::Matrix random_matrix(hybridsim::Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
    hybridsim::Matrix m(rows, cols);
    for (double& v : m.data) v = rng.uniform(-scale, scale);
    return m;
}

inline std::vector<double> random_vector(hybridsim::Rng& rng, std::size_t n, double scale = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-scale, scale);
    return v;
}

}  // namespace testutil

#define EXPECT_ERROR_KIND(stmt, expected_kind)                                            \
    do {                                                                                  \
        try {                                                                             \
            stmt;                                                                         \
            ADD_FAILURE() << "expected hybridsim::Error of kind "                         \
                          << hybridsim::to_string(expected_kind);                         \
        } catch (const hybridsim::Error& e) {                                             \
            EXPECT_EQ(e.kind(), expected_kind) << e.what();                               \
        }                                                                                 \
    } while (0)
