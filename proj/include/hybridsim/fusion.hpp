#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hybridsim/corpus.hpp"
#include "hybridsim/error.hpp"
#include "hybridsim/evalmetrics.hpp"
#include "hybridsim/lexsim.hpp"

namespace hybridsim {

enum class SelectionMetric { pearson, spearman };

inline std::string_view to_string(SelectionMetric m) noexcept {
    return m == SelectionMetric::pearson ? "pearson" : "spearman";
}

struct HybridConfig {
    double alpha = 0.5;
    std::string deep_scorer = "lexical-only";
    std::string lexical_scorer = "word2vec";
};

struct AlphaGridPoint {
    double alpha = 0.0;
    // NaN when the blended scores are constant at this alpha.
    double pearson = 0.0;
    double spearman = 0.0;
};

struct AlphaSearchResult {
    double best_alpha = 0.0;
    std::vector<AlphaGridPoint> grid;
    SelectionMetric metric = SelectionMetric::pearson;
    /// Number of grid points that tied with the winner (winner is the largest alpha among them).
    std::size_t ties = 0;
};

/// alpha * deep + (1 - alpha) * lexical.
inline double hybrid(double sim_d, double sim_w, double alpha) {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(sim_d) || !in_unit(sim_w) || !in_unit(alpha))
        throw Error(ErrorKind::range, "hybrid inputs must lie in [0, 1] (sim_d=" + detail::format_double(sim_d) +
                                          ", sim_w=" + detail::format_double(sim_w) +
                                          ", alpha=" + detail::format_double(alpha) + ")");
    return alpha * sim_d + (1.0 - alpha) * sim_w;
}

/// Lexical component for fusion: the all-OOV signal becomes 0 with the flag raised.
struct LexicalComponent {
    double value = 0.0;
    bool all_oov = false;
    double coverage_left = 0.0;
    double coverage_right = 0.0;
};

inline LexicalComponent lexical_component(const SentenceMatrix& left, const SentenceMatrix& right,
                                          const LexsimOptions& opt = {}) {
    if (auto score = lexical_similarity(left, right, opt))
        return {score->value, false, score->coverage_left, score->coverage_right};
    return {0.0, true, left.coverage(), right.coverage()};
}

/// Candidate alphas 0, step, 2*step, ... with 1 always included.
inline std::vector<double> alpha_grid(double step) {
    if (!(step > 0.0 && step <= 0.5)) throw Error(ErrorKind::config, "alpha step must lie in (0, 0.5]");
    std::vector<double> grid;
    for (std::size_t i = 0;; ++i) {
        const double a = static_cast<double>(i) * step;
        if (a >= 1.0 - 1e-9) break;
        grid.push_back(a);
    }
    grid.push_back(1.0);
    return grid;
}

/// Grid search for alpha on a development set. Ties go to the larger alpha.
inline AlphaSearchResult select_alpha(std::span<const double> deep, std::span<const double> lexical,
                                      std::span<const double> gold, double step = 0.05,
                                      SelectionMetric metric = SelectionMetric::pearson) {
    if (deep.size() != lexical.size() || deep.size() != gold.size())
        throw Error(ErrorKind::shape, "select_alpha inputs differ in length");
    if (gold.size() < 2) throw Error(ErrorKind::undefined_correlation, "select_alpha needs at least 2 pairs");
    {
        bool constant = true;
        for (double g : gold) constant = constant && g == gold[0];
        if (constant) throw Error(ErrorKind::undefined_correlation, "gold scores are constant");
    }

    AlphaSearchResult result;
    result.metric = metric;
    std::vector<double> blended(gold.size());
    std::optional<double> best;
    for (double alpha : alpha_grid(step)) {
        for (std::size_t i = 0; i < gold.size(); ++i) blended[i] = hybrid(deep[i], lexical[i], alpha);
        AlphaGridPoint point{alpha, std::nan(""), std::nan("")};
        try {
            point.pearson = pearson(blended, gold);
            point.spearman = spearman(blended, gold);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::undefined_correlation) throw;
        }
        result.grid.push_back(point);

        const double value = metric == SelectionMetric::pearson ? point.pearson : point.spearman;
        if (std::isnan(value)) continue;
        if (!best || value > *best) {
            best = value;
            result.best_alpha = alpha;
            result.ties = 0;
        } else if (value == *best) {
            result.best_alpha = alpha;
            ++result.ties;
        }
    }
    if (!best) throw Error(ErrorKind::undefined_correlation, "blended scores are constant at every alpha");
    return result;
}

inline void write_alpha_grid_csv(std::ostream& out, const AlphaSearchResult& r) {
    out << "alpha,pearson,spearman\n";
    for (const auto& p : r.grid)
        out << detail::format_double(p.alpha) << ',' << detail::format_double(p.pearson) << ','
            << detail::format_double(p.spearman) << '\n';
}

} // namespace hybridsim
