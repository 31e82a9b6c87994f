#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hybridsim/error.hpp"
#include "hybridsim/neural/siamese.hpp"
#include "hybridsim/random.hpp"

namespace hybridsim::neural {

struct GradCheckResult {
    double max_relative_error = 0.0;
    std::size_t worst_index = 0;
    std::string worst_parameter;
    std::size_t parameters = 0;
};

inline double relative_error(double analytic, double numeric) {
    return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-8});
}

/// Compares `analytic` against central differences of `loss` for every entry
/// of `params`. Each entry is restored after probing.
inline GradCheckResult grad_check(std::span<double> params, std::span<const double> analytic,
                                  const std::function<double()>& loss, double step = 1e-5) {
    if (params.size() != analytic.size()) throw Error(ErrorKind::shape, "gradient and parameter counts differ");
    GradCheckResult result;
    result.parameters = params.size();
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!std::isfinite(analytic[i]))
            throw Error(ErrorKind::numeric, "non-finite analytic gradient at parameter " + std::to_string(i));
        const double saved = params[i];
        params[i] = saved + step;
        const double up = loss();
        params[i] = saved - step;
        const double down = loss();
        params[i] = saved;
        const double numeric = (up - down) / (2.0 * step);
        if (!std::isfinite(numeric))
            throw Error(ErrorKind::numeric, "non-finite numeric gradient at parameter " + std::to_string(i));
        const double err = relative_error(analytic[i], numeric);
        if (i == 0 || err > result.max_relative_error) {
            result.max_relative_error = err;
            result.worst_index = i;
        }
    }
    return result;
}

/// One siamese pair with a model, ready to be checked.
struct GradCheckCase {
    SiameseModel model;
    Matrix left;
    Matrix right;
    double gold = 0.0;
};

namespace detail {

inline std::string parameter_name(const SiameseModel& m, std::size_t flat_index) {
    for (const auto& t : m.tensors()) {
        if (flat_index < t.values.size()) return t.name + "[" + std::to_string(flat_index) + "]";
        flat_index -= t.values.size();
    }
    return "?";
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
    Matrix m(rows, cols);
    for (double& v : m.data) v = rng.uniform(-scale, scale);
    return m;
}

} // namespace detail

/// Checks the siamese loss gradient. `corrupt` is added to the first analytic
/// component; it exists so tests can confirm the check detects a wrong gradient.
inline GradCheckResult grad_check_siamese(const GradCheckCase& c, double step = 1e-5, double corrupt = 0.0) {
    SiameseModel grad = c.model.zeros_like();
    loss_and_gradient(c.model, c.left, c.right, c.gold, grad);
    Vector analytic = grad.flatten();
    if (!analytic.empty()) analytic[0] += corrupt;

    SiameseModel probe = c.model;
    Vector flat = probe.flatten();
    auto loss = [&] {
        probe.assign(flat);
        return pair_loss(probe, c.left, c.right, c.gold);
    };
    GradCheckResult r = grad_check(flat, analytic, loss, step);
    r.worst_parameter = detail::parameter_name(c.model, r.worst_index);
    return r;
}

/// Kink margin below which a random case is re-drawn.
inline constexpr double gradcheck_kink_margin = 1e-4;

namespace detail {

template <class Draw>
GradCheckCase draw_until_smooth(std::uint64_t seed, Draw&& draw) {
    for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
        Rng rng(seed * 1000003ULL + attempt);
        GradCheckCase c = draw(rng);
        if (kink_margin(pair_forward(c.model, c.left, c.right)) >= gradcheck_kink_margin) return c;
    }
    throw Error(ErrorKind::numeric, "could not draw a gradient-check case away from non-differentiable points");
}

inline GradCheckCase fill_case(const ModelConfig& cfg, Rng& rng, std::size_t len_left, std::size_t len_right) {
    GradCheckCase c;
    c.model = SiameseModel::initialize(cfg, rng.next(), 0.5);
    c.left = random_matrix(rng, len_left, cfg.embed_dim, 1.0);
    c.right = random_matrix(rng, len_right, cfg.embed_dim, 1.0);
    c.gold = rng.uniform01();
    return c;
}

} // namespace detail

/// Fixed small dimensions (E = 4, H = 4; N = 4, C = 2 for capsules) with weights drawn from `seed`.
inline GradCheckCase default_gradcheck_case(Architecture arch, std::uint64_t seed) {
    ModelConfig cfg;
    cfg.arch = arch;
    cfg.embed_dim = 4;
    cfg.hidden = 4;
    cfg.kernel = arch == Architecture::gcnn_gru ? 1 : 3;
    cfg.filters = 4;
    cfg.capsule_filters = 4;
    cfg.capsules = 2;
    cfg.seq_len = 6;
    const std::size_t len = arch == Architecture::lstm || arch == Architecture::gru ? 3 : 6;
    return detail::draw_until_smooth(seed, [&](Rng& rng) { return detail::fill_case(cfg, rng, len, len); });
}

/// Randomly sized small configuration (dims <= 5, lengths <= 8).
inline GradCheckCase random_gradcheck_case(Architecture arch, std::uint64_t seed) {
    return detail::draw_until_smooth(seed, [&](Rng& rng) {
        ModelConfig cfg;
        cfg.arch = arch;
        cfg.embed_dim = 2 + rng.below(4);
        cfg.hidden = 2 + rng.below(4);
        cfg.bidirectional = cfg.recurrent() && rng.below(2) == 1;
        cfg.kernel = arch == Architecture::gcnn_gru ? 1 : 1 + 2 * rng.below(2);
        cfg.filters = 2 + rng.below(3);
        cfg.capsules = 1 + rng.below(2);
        cfg.capsule_filters = cfg.capsules * (1 + rng.below(2));
        cfg.seq_len = cfg.kernel + rng.below(4);
        std::size_t lo = cfg.min_length();
        const std::size_t span = std::min<std::size_t>(3, 8 - lo + 1);
        const std::size_t len_left = lo + rng.below(span);
        const std::size_t len_right = lo + rng.below(span);
        return detail::fill_case(cfg, rng, len_left, len_right);
    });
}

} // namespace hybridsim::neural
