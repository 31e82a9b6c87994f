#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "hybridsim/error.hpp"
#include "hybridsim/matrix.hpp"
#include "hybridsim/neural/conv.hpp"
#include "hybridsim/neural/recurrent.hpp"
#include "hybridsim/neural/similarity.hpp"
#include "hybridsim/random.hpp"

namespace hybridsim::neural {

enum class Architecture { lstm, gru, cnn_lstm, gcnn_gru, capsule };

inline constexpr std::array<Architecture, 5> all_architectures{Architecture::lstm, Architecture::gru,
                                                                Architecture::cnn_lstm, Architecture::gcnn_gru,
                                                                Architecture::capsule};

constexpr std::string_view to_string(Architecture a) noexcept {
    switch (a) {
    case Architecture::lstm: return "lstm";
    case Architecture::gru: return "gru";
    case Architecture::cnn_lstm: return "cnn-lstm";
    case Architecture::gcnn_gru: return "gcnn-gru";
    case Architecture::capsule: return "capsule";
    }
    return "unknown";
}

inline std::optional<Architecture> parse_architecture(std::string_view s) {
    for (auto a : all_architectures)
        if (to_string(a) == s) return a;
    return std::nullopt;
}

struct ModelConfig {
    Architecture arch = Architecture::lstm;
    std::size_t embed_dim = 0;
    std::size_t hidden = 8;
    bool bidirectional = false;
    std::size_t kernel = 3;           // conv kernel (base kernel for G-CNN)
    std::size_t filters = 8;          // conv / conv1 filter count
    std::size_t capsule_filters = 8;  // conv2 filter count
    std::size_t capsules = 2;
    std::size_t seq_len = 8;          // capsule inputs are padded / truncated to this

    bool recurrent() const noexcept { return arch != Architecture::capsule; }

    /// Fewest usable rows a sentence needs to be encoded.
    std::size_t min_length() const noexcept {
        switch (arch) {
        case Architecture::cnn_lstm: return kernel;
        case Architecture::gcnn_gru: return kernel + 4;
        default: return 1;
        }
    }

    void validate() const {
        if (embed_dim == 0) throw Error(ErrorKind::config, "embedding dim must be >= 1");
        if (recurrent() && hidden == 0) throw Error(ErrorKind::config, "hidden dim must be >= 1");
        if (arch == Architecture::capsule) {
            if (bidirectional) throw Error(ErrorKind::config, "capsule encoder has no recurrent stage");
            if (seq_len < kernel) throw Error(ErrorKind::config, "capsule seq_len must be >= kernel");
            if (capsules == 0 || capsule_filters % capsules != 0)
                throw Error(ErrorKind::config, "capsule count must divide capsule filter count");
        }
        if (arch != Architecture::lstm && arch != Architecture::gru && kernel % 2 == 0)
            throw Error(ErrorKind::config, "kernel size must be odd");
    }
};

template <class T>
struct BasicTensorView {
    std::string name;
    std::vector<std::size_t> shape;
    std::span<T> values;
};

using TensorView = BasicTensorView<double>;
using ConstTensorView = BasicTensorView<const double>;

/// Weights of one siamese encoder; both sentences go through the same weights.
struct SiameseModel {
    ModelConfig config;
    std::optional<ConvParams> conv;
    std::optional<GcnnParams> gcnn;
    std::optional<CapsuleParams> capsule;
    std::optional<RecurrentParams> rnn;
    std::optional<RecurrentParams> rnn_back;

    static SiameseModel zeros(const ModelConfig& cfg) {
        cfg.validate();
        SiameseModel m;
        m.config = cfg;
        std::size_t rnn_input = cfg.embed_dim;
        CellKind cell = CellKind::lstm;
        switch (cfg.arch) {
        case Architecture::lstm: break;
        case Architecture::gru: cell = CellKind::gru; break;
        case Architecture::cnn_lstm:
            m.conv = ConvParams::centered(cfg.kernel, cfg.embed_dim, cfg.filters);
            rnn_input = cfg.filters;
            break;
        case Architecture::gcnn_gru:
            m.gcnn = GcnnParams::zeros(cfg.kernel, cfg.embed_dim, cfg.filters);
            rnn_input = cfg.filters;
            cell = CellKind::gru;
            break;
        case Architecture::capsule: {
            CapsuleParams caps;
            caps.conv1 = ConvParams::centered(cfg.kernel, cfg.embed_dim, cfg.filters);
            caps.conv2 = ConvParams::zeros(cfg.seq_len - cfg.kernel + 1, cfg.filters, cfg.capsule_filters);
            caps.capsules = cfg.capsules;
            m.capsule = std::move(caps);
            return m;
        }
        }
        m.rnn = RecurrentParams::zeros(cell, rnn_input, cfg.hidden);
        if (cfg.bidirectional) m.rnn_back = RecurrentParams::zeros(cell, rnn_input, cfg.hidden);
        return m;
    }

    /// Uniform [-scale, scale] weights; LSTM forget-gate biases start at 1.
    static SiameseModel initialize(const ModelConfig& cfg, std::uint64_t seed, double scale = 0.1) {
        SiameseModel m = zeros(cfg);
        Rng rng(seed);
        for (auto& t : m.tensors())
            for (double& v : t.values) v = rng.uniform(-scale, scale);
        for (auto* r : {m.rnn ? &*m.rnn : nullptr, m.rnn_back ? &*m.rnn_back : nullptr}) {
            if (r == nullptr || r->kind != CellKind::lstm) continue;
            std::fill(r->b.begin() + static_cast<std::ptrdiff_t>(r->hidden_dim),
                      r->b.begin() + static_cast<std::ptrdiff_t>(2 * r->hidden_dim), 1.0);
        }
        return m;
    }

    SiameseModel zeros_like() const { return zeros(config); }

    /// Every weight tensor in declared (checkpoint) order.
    std::vector<TensorView> tensors() { return collect_tensors(*this); }
    std::vector<ConstTensorView> tensors() const { return collect_tensors(*this); }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const auto& t : tensors()) n += t.values.size();
        return n;
    }

    Vector flatten() const {
        Vector out;
        for (const auto& t : tensors()) out.insert(out.end(), t.values.begin(), t.values.end());
        return out;
    }

    void assign(std::span<const double> flat) {
        if (flat.size() != parameter_count()) throw Error(ErrorKind::shape, "flat parameter vector has wrong size");
        std::size_t k = 0;
        for (auto& t : tensors())
            for (double& v : t.values) v = flat[k++];
    }

private:
    template <class Self>
    using ValueFor = std::conditional_t<std::is_const_v<Self>, const double, double>;

    template <class Self>
    static std::vector<BasicTensorView<ValueFor<Self>>> collect_tensors(Self& self) {
        using Value = ValueFor<Self>;
        std::vector<BasicTensorView<Value>> out;
        auto add_matrix = [&](std::string name, auto& m) {
            out.push_back({std::move(name), {m.rows, m.cols}, std::span<Value>(m.data)});
        };
        auto add_vector = [&](std::string name, auto& v) {
            out.push_back({std::move(name), {v.size()}, std::span<Value>(v)});
        };
        auto add_conv = [&](const std::string& prefix, auto& c) {
            add_matrix(prefix + ".w", c.w);
            add_vector(prefix + ".b", c.b);
        };
        auto add_rnn = [&](const std::string& prefix, auto& r) {
            add_matrix(prefix + ".w", r.w);
            add_matrix(prefix + ".u", r.u);
            add_vector(prefix + ".b", r.b);
        };
        if (self.conv) add_conv("conv", *self.conv);
        if (self.gcnn)
            for (std::size_t i = 0; i < 3; ++i) add_conv("gcnn" + std::to_string(i), self.gcnn->convs[i]);
        if (self.capsule) {
            add_conv("capsule.conv1", self.capsule->conv1);
            add_conv("capsule.conv2", self.capsule->conv2);
        }
        if (self.rnn) add_rnn("rnn", *self.rnn);
        if (self.rnn_back) add_rnn("rnn_back", *self.rnn_back);
        return out;
    }
};

/// Pads with zero rows or truncates to the capsule sequence length; other
/// architectures take the sentence as is.
inline Matrix fit_input(const ModelConfig& cfg, const Matrix& rows) {
    if (cfg.arch != Architecture::capsule) return rows;
    Matrix out(cfg.seq_len, rows.cols);
    const std::size_t n = std::min(rows.rows, cfg.seq_len);
    std::copy(rows.data.begin(), rows.data.begin() + static_cast<std::ptrdiff_t>(n * rows.cols), out.data.begin());
    return out;
}

struct EncodeTrace {
    std::optional<ConvTrace> conv;
    std::optional<GcnnTrace> gcnn;
    std::optional<CapsuleTrace> capsule;
    std::optional<RecurrentTrace> fwd;
    std::optional<RecurrentTrace> bwd;
    Vector repr;
};

namespace detail {

inline Matrix reversed_rows(const Matrix& m) {
    Matrix out(m.rows, m.cols);
    for (std::size_t r = 0; r < m.rows; ++r) {
        auto src = m.row(m.rows - 1 - r);
        std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
}

} // namespace detail

/// Encodes the usable (non-OOV) rows of one sentence.
inline EncodeTrace encode_forward(const SiameseModel& m, const Matrix& sentence) {
    if (sentence.cols != m.config.embed_dim)
        throw Error(ErrorKind::shape, "sentence dim " + std::to_string(sentence.cols) + " does not match model dim " +
                                          std::to_string(m.config.embed_dim));
    if (sentence.rows == 0) throw Error(ErrorKind::all_oov, "sentence has no usable rows");
    if (sentence.rows < m.config.min_length())
        throw Error(ErrorKind::too_short, "sentence of length " + std::to_string(sentence.rows) + " is shorter than " +
                                              std::to_string(m.config.min_length()));
    EncodeTrace tr;
    if (m.capsule) {
        tr.capsule = capsule_forward(*m.capsule, fit_input(m.config, sentence));
        tr.repr = tr.capsule->conv2.out.data;
        return tr;
    }
    const Matrix* seq = &sentence;
    if (m.conv) {
        tr.conv = conv_forward(*m.conv, sentence);
        seq = &tr.conv->out;
    } else if (m.gcnn) {
        tr.gcnn = gcnn_forward(*m.gcnn, sentence);
        seq = &tr.gcnn->merged;
    }
    tr.fwd = recurrent_forward(*m.rnn, *seq);
    tr.repr = tr.fwd->last();
    if (m.rnn_back) {
        tr.bwd = recurrent_forward(*m.rnn_back, detail::reversed_rows(*seq));
        tr.repr.insert(tr.repr.end(), tr.bwd->last().begin(), tr.bwd->last().end());
    }
    return tr;
}

inline Vector encode(const SiameseModel& m, const Matrix& sentence) { return encode_forward(m, sentence).repr; }

inline void encode_backward(const SiameseModel& m, const EncodeTrace& tr, std::span<const double> d_repr,
                            SiameseModel& grad) {
    if (m.capsule) {
        capsule_backward(*m.capsule, *tr.capsule, d_repr, *grad.capsule);
        return;
    }
    const std::size_t hd = m.config.hidden;
    const bool need_seq_grad = m.conv || m.gcnn;
    Matrix d_seq(tr.fwd->input.rows, tr.fwd->input.cols);
    recurrent_backward(*m.rnn, *tr.fwd, d_repr.subspan(0, hd), *grad.rnn, need_seq_grad ? &d_seq : nullptr);
    if (m.rnn_back) {
        Matrix d_rev(d_seq.rows, d_seq.cols);
        recurrent_backward(*m.rnn_back, *tr.bwd, d_repr.subspan(hd, hd), *grad.rnn_back, need_seq_grad ? &d_rev : nullptr);
        if (need_seq_grad) {
            const Matrix back = detail::reversed_rows(d_rev);
            for (std::size_t i = 0; i < d_seq.data.size(); ++i) d_seq.data[i] += back.data[i];
        }
    }
    if (m.conv) conv_backward(*m.conv, *tr.conv, d_seq, *grad.conv);
    if (m.gcnn) gcnn_backward(*m.gcnn, *tr.gcnn, d_seq, *grad.gcnn);
}

/// Similarity of two encoder outputs: capsule mean for the capsule encoder,
/// plain Manhattan similarity otherwise.
inline double representation_similarity(const ModelConfig& cfg, std::span<const double> a, std::span<const double> b) {
    if (cfg.arch != Architecture::capsule) return manhattan_similarity(a, b);
    const std::size_t width = cfg.capsule_filters / cfg.capsules;
    Matrix ca(cfg.capsules, width), cb(cfg.capsules, width);
    std::copy(a.begin(), a.end(), ca.data.begin());
    std::copy(b.begin(), b.end(), cb.data.begin());
    return capsule_similarity(ca, cb);
}

inline double score(const SiameseModel& m, const Matrix& left, const Matrix& right) {
    return representation_similarity(m.config, encode(m, left), encode(m, right));
}

namespace detail {

// d sim / d a for either similarity; d sim / d b is its negation.
inline Vector similarity_gradient(const ModelConfig& cfg, std::span<const double> a, std::span<const double> b) {
    Vector g(a.size());
    const std::size_t width = cfg.arch == Architecture::capsule ? cfg.capsule_filters / cfg.capsules : a.size();
    const double weight = cfg.arch == Architecture::capsule ? 1.0 / static_cast<double>(cfg.capsules) : 1.0;
    for (std::size_t start = 0; start < a.size(); start += width) {
        double dist = 0.0;
        for (std::size_t i = start; i < start + width; ++i) dist += std::abs(a[i] - b[i]);
        const double s = weight * std::exp(-dist);
        for (std::size_t i = start; i < start + width; ++i) g[i] = -s * sign(a[i] - b[i]);
    }
    return g;
}

} // namespace detail

struct PairForward {
    EncodeTrace left;
    EncodeTrace right;
    double similarity = 0.0;
};

inline PairForward pair_forward(const SiameseModel& m, const Matrix& left, const Matrix& right) {
    PairForward f{encode_forward(m, left), encode_forward(m, right), 0.0};
    f.similarity = representation_similarity(m.config, f.left.repr, f.right.repr);
    return f;
}

/// (sim - gold)^2 for one pair; its gradient is accumulated into `grad` scaled by `weight`.
inline double loss_and_gradient(const SiameseModel& m, const Matrix& left, const Matrix& right, double gold,
                                SiameseModel& grad, double weight = 1.0) {
    const PairForward f = pair_forward(m, left, right);
    const double err = f.similarity - gold;
    const double d_sim = 2.0 * err * weight;
    Vector g = detail::similarity_gradient(m.config, f.left.repr, f.right.repr);
    for (double& x : g) x *= d_sim;
    encode_backward(m, f.left, g, grad);
    for (double& x : g) x = -x;
    encode_backward(m, f.right, g, grad);
    return err * err;
}

inline double pair_loss(const SiameseModel& m, const Matrix& left, const Matrix& right, double gold) {
    const double err = score(m, left, right) - gold;
    return err * err;
}

/// Distance of a forward pass from the nearest non-differentiable point:
/// ReLU inputs at 0, ties inside the G-CNN max, and zero L1 components.
/// Exact zeros in the L1 term are skipped; they come from inputs that stay
/// identical under perturbation.
inline double kink_margin(const PairForward& f) {
    double margin = std::numeric_limits<double>::infinity();
    auto conv_margin = [&](const ConvTrace& c) {
        for (double v : c.pre.data) margin = std::min(margin, std::abs(v));
    };
    for (const EncodeTrace* t : {&f.left, &f.right}) {
        if (t->conv) conv_margin(*t->conv);
        if (t->capsule) {
            conv_margin(t->capsule->conv1);
            conv_margin(t->capsule->conv2);
        }
        if (t->gcnn) {
            for (const auto& c : t->gcnn->maps) conv_margin(c);
            const std::size_t n = t->gcnn->merged.cols;
            for (std::size_t i = 0; i < t->gcnn->merged.rows; ++i)
                for (std::size_t col = 0; col < n; ++col) {
                    const double top = t->gcnn->merged(i, col);
                    if (top <= 0.0) continue;
                    const std::size_t w = t->gcnn->winner[i * n + col];
                    for (std::size_t k = 0; k < 3; ++k) {
                        if (k == w) continue;
                        margin = std::min(margin, top - t->gcnn->maps[k].out(i + GcnnTrace::offset(k), col));
                    }
                }
        }
    }
    for (std::size_t i = 0; i < f.left.repr.size(); ++i) {
        const double d = std::abs(f.left.repr[i] - f.right.repr[i]);
        if (d != 0.0) margin = std::min(margin, d);
    }
    return margin;
}

/// params -= lr * grad.
inline void sgd_step(SiameseModel& m, SiameseModel& grad, double lr) {
    auto p = m.tensors();
    auto g = grad.tensors();
    for (std::size_t t = 0; t < p.size(); ++t)
        for (std::size_t i = 0; i < p[t].values.size(); ++i) p[t].values[i] -= lr * g[t].values[i];
}

} // namespace hybridsim::neural
