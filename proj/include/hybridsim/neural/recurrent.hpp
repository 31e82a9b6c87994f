#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "hybridsim/error.hpp"
#include "hybridsim/matrix.hpp"
#include "hybridsim/neural/common.hpp"

namespace hybridsim::neural {

enum class CellKind { lstm, gru };

/// Weights of one recurrent cell.
///
/// Gate blocks are stacked along the rows of `w`, `u` and `b`:
///   LSTM: input, forget, candidate, output  (4H rows)
///   GRU:  update, reset, candidate          (3H rows)
/// The GRU candidate applies `u` to (reset * h_prev).
struct RecurrentParams {
    CellKind kind = CellKind::lstm;
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    Matrix w;
    Matrix u;
    Vector b;

    std::size_t gates() const noexcept { return kind == CellKind::lstm ? 4 : 3; }

    static RecurrentParams zeros(CellKind kind, std::size_t input_dim, std::size_t hidden_dim) {
        RecurrentParams p;
        p.kind = kind;
        p.input_dim = input_dim;
        p.hidden_dim = hidden_dim;
        const std::size_t g = p.gates() * hidden_dim;
        p.w = Matrix(g, input_dim);
        p.u = Matrix(g, hidden_dim);
        p.b.assign(g, 0.0);
        return p;
    }
};

/// Everything the backward pass needs from one forward run.
struct RecurrentTrace {
    Matrix input;
    std::vector<Vector> h;      // h[0] = 0, h[t + 1] after step t
    std::vector<Vector> c;      // LSTM cell states, same indexing
    std::vector<Vector> gates;  // activated gate values per step
    std::vector<Vector> reset_h;  // GRU: reset * h_prev per step

    const Vector& last() const { return h.back(); }
};

inline RecurrentTrace recurrent_forward(const RecurrentParams& p, const Matrix& seq) {
    if (seq.cols != p.input_dim)
        throw Error(ErrorKind::shape, "recurrent input has dim " + std::to_string(seq.cols) + ", cell expects " +
                                          std::to_string(p.input_dim));
    if (seq.rows == 0) throw Error(ErrorKind::empty_input, "recurrent encoder needs at least one step");

    const std::size_t hd = p.hidden_dim;
    RecurrentTrace tr;
    tr.input = seq;
    tr.h.assign(1, Vector(hd, 0.0));
    if (p.kind == CellKind::lstm) tr.c.assign(1, Vector(hd, 0.0));

    for (std::size_t t = 0; t < seq.rows; ++t) {
        const Vector& h_prev = tr.h.back();
        auto x = seq.row(t);
        Vector h(hd);
        if (p.kind == CellKind::lstm) {
            Vector a = p.b;
            detail::gemv_acc(p.w, x, a);
            detail::gemv_acc(p.u, h_prev, a);
            const Vector& c_prev = tr.c.back();
            Vector c(hd);
            for (std::size_t j = 0; j < hd; ++j) {
                const double in = sigmoid(a[j]);
                const double fg = sigmoid(a[hd + j]);
                const double g = std::tanh(a[2 * hd + j]);
                const double o = sigmoid(a[3 * hd + j]);
                a[j] = in;
                a[hd + j] = fg;
                a[2 * hd + j] = g;
                a[3 * hd + j] = o;
                c[j] = fg * c_prev[j] + in * g;
                h[j] = o * std::tanh(c[j]);
            }
            tr.c.push_back(std::move(c));
            tr.gates.push_back(std::move(a));
        } else {
            // z and r blocks take u * h_prev; the candidate block takes u * (r * h_prev).
            Vector a = p.b;
            detail::gemv_acc(p.w, x, a);
            for (std::size_t r = 0; r < 2 * hd; ++r) a[r] += detail::dot(p.u.row(r), h_prev);
            Vector rh(hd);
            for (std::size_t j = 0; j < hd; ++j) {
                a[j] = sigmoid(a[j]);
                a[hd + j] = sigmoid(a[hd + j]);
                rh[j] = a[hd + j] * h_prev[j];
            }
            for (std::size_t j = 0; j < hd; ++j) {
                const double n = std::tanh(a[2 * hd + j] + detail::dot(p.u.row(2 * hd + j), rh));
                a[2 * hd + j] = n;
                const double z = a[j];
                h[j] = (1.0 - z) * h_prev[j] + z * n;
            }
            tr.reset_h.push_back(std::move(rh));
            tr.gates.push_back(std::move(a));
        }
        tr.h.push_back(std::move(h));
    }
    return tr;
}

/// Last hidden state after consuming every row of `seq` from a zero state.
inline Vector recurrent_encode(const RecurrentParams& p, const Matrix& seq) {
    return recurrent_forward(p, seq).last();
}

/// Backpropagates dL/dh_L through time. Parameter gradients are accumulated
/// into `grad`; input gradients into `d_input` when given.
inline void recurrent_backward(const RecurrentParams& p, const RecurrentTrace& tr, std::span<const double> d_last,
                               RecurrentParams& grad, Matrix* d_input = nullptr) {
    const std::size_t hd = p.hidden_dim;
    const std::size_t steps = tr.input.rows;
    Vector dh(d_last.begin(), d_last.end());
    Vector dc(hd, 0.0);
    Vector da(p.gates() * hd);

    for (std::size_t s = steps; s-- > 0;) {
        const Vector& h_prev = tr.h[s];
        const Vector& g = tr.gates[s];
        auto x = tr.input.row(s);
        Vector dh_prev(hd, 0.0);

        if (p.kind == CellKind::lstm) {
            const Vector& c = tr.c[s + 1];
            const Vector& c_prev = tr.c[s];
            for (std::size_t j = 0; j < hd; ++j) {
                const double in = g[j], fg = g[hd + j], cand = g[2 * hd + j], o = g[3 * hd + j];
                const double tc = std::tanh(c[j]);
                dc[j] += dh[j] * o * (1.0 - tc * tc);
                da[j] = dc[j] * cand * in * (1.0 - in);
                da[hd + j] = dc[j] * c_prev[j] * fg * (1.0 - fg);
                da[2 * hd + j] = dc[j] * in * (1.0 - cand * cand);
                da[3 * hd + j] = dh[j] * tc * o * (1.0 - o);
                dc[j] *= fg;
            }
            detail::outer_acc(grad.u, da, h_prev);
            detail::gemv_t_acc(p.u, da, dh_prev);
        } else {
            const Vector& rh = tr.reset_h[s];
            Vector d_rh(hd, 0.0);
            for (std::size_t j = 0; j < hd; ++j) {
                const double z = g[j], n = g[2 * hd + j];
                dh_prev[j] += dh[j] * (1.0 - z);
                da[j] = dh[j] * (n - h_prev[j]) * z * (1.0 - z);
                da[2 * hd + j] = dh[j] * z * (1.0 - n * n);
            }
            // Candidate block: u acts on r * h_prev.
            for (std::size_t j = 0; j < hd; ++j) {
                const double dn = da[2 * hd + j];
                auto urow = p.u.row(2 * hd + j);
                auto grow = grad.u.row(2 * hd + j);
                for (std::size_t k = 0; k < hd; ++k) {
                    grow[k] += dn * rh[k];
                    d_rh[k] += urow[k] * dn;
                }
            }
            for (std::size_t j = 0; j < hd; ++j) {
                const double r = g[hd + j];
                dh_prev[j] += d_rh[j] * r;
                da[hd + j] = d_rh[j] * h_prev[j] * r * (1.0 - r);
            }
            // Update and reset blocks: u acts on h_prev.
            for (std::size_t row = 0; row < 2 * hd; ++row) {
                const double d = da[row];
                auto urow = p.u.row(row);
                auto grow = grad.u.row(row);
                for (std::size_t k = 0; k < hd; ++k) {
                    grow[k] += d * h_prev[k];
                    dh_prev[k] += urow[k] * d;
                }
            }
        }

        detail::outer_acc(grad.w, da, x);
        for (std::size_t r = 0; r < da.size(); ++r) grad.b[r] += da[r];
        if (d_input) detail::gemv_t_acc(p.w, da, d_input->row(s));
        dh = std::move(dh_prev);
    }
}

} // namespace hybridsim::neural
