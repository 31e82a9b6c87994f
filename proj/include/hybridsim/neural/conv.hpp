#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "hybridsim/error.hpp"
#include "hybridsim/matrix.hpp"
#include "hybridsim/neural/common.hpp"

namespace hybridsim::neural {

/// N filters of height `kernel` over E-dimensional rows, followed by ReLU.
/// Filter f occupies row f of `w`; column j * E + e multiplies input row
/// (i + j), component e.
struct ConvParams {
    std::size_t kernel = 1;
    std::size_t input_dim = 0;
    std::size_t filters = 0;
    Matrix w;
    Vector b;

    std::size_t output_height(std::size_t length) const noexcept { return length - kernel + 1; }

    static ConvParams zeros(std::size_t kernel, std::size_t input_dim, std::size_t filters) {
        if (kernel == 0 || filters == 0 || input_dim == 0)
            throw Error(ErrorKind::config, "convolution needs kernel, input dim and filters >= 1");
        ConvParams p;
        p.kernel = kernel;
        p.input_dim = input_dim;
        p.filters = filters;
        p.w = Matrix(filters, kernel * input_dim);
        p.b.assign(filters, 0.0);
        return p;
    }

    /// Word-window convolution: kernel must be odd so windows centre on a word.
    static ConvParams centered(std::size_t kernel, std::size_t input_dim, std::size_t filters) {
        if (kernel % 2 == 0) throw Error(ErrorKind::config, "word-window kernel size must be odd");
        return zeros(kernel, input_dim, filters);
    }
};

struct ConvTrace {
    Matrix input;
    Matrix pre;  // pre-activation, (L - k + 1) x N
    Matrix out;  // ReLU(pre)
};

inline ConvTrace conv_forward(const ConvParams& p, const Matrix& x) {
    if (x.cols != p.input_dim)
        throw Error(ErrorKind::shape, "convolution input has dim " + std::to_string(x.cols) + ", expected " +
                                          std::to_string(p.input_dim));
    if (x.rows < p.kernel)
        throw Error(ErrorKind::too_short, "sentence of length " + std::to_string(x.rows) + " is shorter than kernel " +
                                              std::to_string(p.kernel));
    const std::size_t height = p.output_height(x.rows);
    const std::size_t window = p.kernel * p.input_dim;
    ConvTrace tr{x, Matrix(height, p.filters), Matrix(height, p.filters)};
    for (std::size_t i = 0; i < height; ++i) {
        // Rows i .. i+k-1 are contiguous in row-major storage.
        std::span<const double> patch(x.data.data() + i * x.cols, window);
        for (std::size_t f = 0; f < p.filters; ++f) {
            const double a = p.b[f] + detail::dot(p.w.row(f), patch);
            tr.pre(i, f) = a;
            tr.out(i, f) = relu(a);
        }
    }
    return tr;
}

/// Valid (unpadded) convolution with ReLU; output is (L - k + 1) x N.
inline Matrix conv1d(const ConvParams& p, const Matrix& x) { return conv_forward(p, x).out; }

inline void conv_backward(const ConvParams& p, const ConvTrace& tr, const Matrix& d_out, ConvParams& grad,
                          Matrix* d_input = nullptr) {
    const std::size_t window = p.kernel * p.input_dim;
    for (std::size_t i = 0; i < tr.pre.rows; ++i) {
        std::span<const double> patch(tr.input.data.data() + i * tr.input.cols, window);
        for (std::size_t f = 0; f < p.filters; ++f) {
            if (tr.pre(i, f) <= 0.0) continue;
            const double d = d_out(i, f);
            if (d == 0.0) continue;
            grad.b[f] += d;
            auto gw = grad.w.row(f);
            for (std::size_t j = 0; j < window; ++j) gw[j] += d * patch[j];
            if (d_input) {
                auto w = p.w.row(f);
                double* dx = d_input->data.data() + i * d_input->cols;
                for (std::size_t j = 0; j < window; ++j) dx[j] += d * w[j];
            }
        }
    }
}

/// Three parallel convolutions with kernel sizes k, k+2, k+4 and equal filter counts.
struct GcnnParams {
    std::array<ConvParams, 3> convs;

    std::size_t base_kernel() const noexcept { return convs[0].kernel; }
    std::size_t filters() const noexcept { return convs[0].filters; }
    std::size_t min_length() const noexcept { return convs[2].kernel; }

    static GcnnParams zeros(std::size_t kernel, std::size_t input_dim, std::size_t filters) {
        return {{ConvParams::centered(kernel, input_dim, filters), ConvParams::centered(kernel + 2, input_dim, filters),
                 ConvParams::centered(kernel + 4, input_dim, filters)}};
    }

    void validate() const {
        if (convs[1].kernel != convs[0].kernel + 2 || convs[2].kernel != convs[0].kernel + 4)
            throw Error(ErrorKind::config, "G-CNN kernel sizes must be k, k+2, k+4");
        if (convs[1].filters != convs[0].filters || convs[2].filters != convs[0].filters)
            throw Error(ErrorKind::config, "G-CNN filter counts must be equal");
    }
};

struct GcnnTrace {
    std::array<ConvTrace, 3> maps;
    Matrix merged;                 // common height x N
    std::vector<std::uint8_t> winner;  // which map supplied merged(i, f)

    /// Row offset of map m inside the common window (centre truncation).
    static std::size_t offset(std::size_t m) noexcept { return 2 - m; }
};

inline GcnnTrace gcnn_forward(const GcnnParams& p, const Matrix& x) {
    p.validate();
    if (x.rows < p.min_length())
        throw Error(ErrorKind::too_short, "G-CNN needs length >= " + std::to_string(p.min_length()) + ", got " +
                                              std::to_string(x.rows));
    GcnnTrace tr;
    for (std::size_t m = 0; m < 3; ++m) tr.maps[m] = conv_forward(p.convs[m], x);
    const std::size_t height = tr.maps[2].out.rows;
    const std::size_t n = p.filters();
    tr.merged = Matrix(height, n);
    tr.winner.assign(height * n, 0);
    for (std::size_t i = 0; i < height; ++i) {
        for (std::size_t f = 0; f < n; ++f) {
            std::uint8_t best = 0;
            double value = tr.maps[0].out(i + GcnnTrace::offset(0), f);
            for (std::uint8_t m = 1; m < 3; ++m) {
                const double v = tr.maps[m].out(i + GcnnTrace::offset(m), f);
                if (v > value) {
                    value = v;
                    best = m;
                }
            }
            tr.merged(i, f) = value;
            tr.winner[i * n + f] = best;
        }
    }
    return tr;
}

/// Element-wise max of the three centre-aligned feature maps.
inline Matrix gcnn_feature_map(const GcnnParams& p, const Matrix& x) { return gcnn_forward(p, x).merged; }

/// Feature map max-pooled over the length axis: one value per filter.
inline Vector gcnn_encode(const GcnnParams& p, const Matrix& x) {
    const Matrix merged = gcnn_feature_map(p, x);
    Vector out(merged.cols, 0.0);
    for (std::size_t f = 0; f < merged.cols; ++f) {
        double best = merged(0, f);
        for (std::size_t i = 1; i < merged.rows; ++i) best = std::max(best, merged(i, f));
        out[f] = best;
    }
    return out;
}

inline void gcnn_backward(const GcnnParams& p, const GcnnTrace& tr, const Matrix& d_merged, GcnnParams& grad,
                          Matrix* d_input = nullptr) {
    const std::size_t n = p.filters();
    std::array<Matrix, 3> d_maps;
    for (std::size_t m = 0; m < 3; ++m) d_maps[m] = Matrix(tr.maps[m].out.rows, n);
    for (std::size_t i = 0; i < tr.merged.rows; ++i)
        for (std::size_t f = 0; f < n; ++f) {
            const std::size_t m = tr.winner[i * n + f];
            d_maps[m](i + GcnnTrace::offset(m), f) += d_merged(i, f);
        }
    for (std::size_t m = 0; m < 3; ++m) conv_backward(p.convs[m], tr.maps[m], d_maps[m], grad.convs[m], d_input);
}

/// Capsule encoder: conv1 is an ordinary word-window convolution; conv2's
/// kernel spans conv1's whole output so it yields exactly N2 scalars, which
/// are read row-major as C capsules of N2 / C values.
struct CapsuleParams {
    ConvParams conv1;
    ConvParams conv2;
    std::size_t capsules = 1;

    std::size_t capsule_width() const noexcept { return conv2.filters / capsules; }

    void validate() const {
        if (capsules == 0 || conv2.filters % capsules != 0)
            throw Error(ErrorKind::config, "capsule count must divide conv2's filter count");
        if (conv2.input_dim != conv1.filters) throw Error(ErrorKind::config, "conv2 input dim must equal conv1 filters");
    }
};

struct CapsuleTrace {
    ConvTrace conv1;
    ConvTrace conv2;
};

inline CapsuleTrace capsule_forward(const CapsuleParams& p, const Matrix& x) {
    p.validate();
    CapsuleTrace tr;
    tr.conv1 = conv_forward(p.conv1, x);
    if (tr.conv1.out.rows != p.conv2.kernel)
        throw Error(ErrorKind::shape, "conv2 kernel " + std::to_string(p.conv2.kernel) +
                                          " does not span conv1 output height " + std::to_string(tr.conv1.out.rows));
    tr.conv2 = conv_forward(p.conv2, tr.conv1.out);
    return tr;
}

/// C x (N2 / C) capsule matrix.
inline Matrix capsule_encode(const CapsuleParams& p, const Matrix& x) {
    const CapsuleTrace tr = capsule_forward(p, x);
    Matrix caps(p.capsules, p.capsule_width());
    caps.data = tr.conv2.out.data;
    return caps;
}

inline void capsule_backward(const CapsuleParams& p, const CapsuleTrace& tr, std::span<const double> d_flat,
                             CapsuleParams& grad, Matrix* d_input = nullptr) {
    Matrix d_out2(1, p.conv2.filters);
    std::copy(d_flat.begin(), d_flat.end(), d_out2.data.begin());
    Matrix d_map1(tr.conv1.out.rows, tr.conv1.out.cols);
    conv_backward(p.conv2, tr.conv2, d_out2, grad.conv2, &d_map1);
    conv_backward(p.conv1, tr.conv1, d_map1, grad.conv1, d_input);
}

} // namespace hybridsim::neural
