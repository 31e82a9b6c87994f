#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>

#include "hybridsim/embed.hpp"
#include "hybridsim/error.hpp"

namespace hybridsim {

struct LexsimOptions {
    /// Floor word-level cosines at 0 so the sentence score stays in [0, 1].
    bool clamp_negative = true;
};

struct LexicalScore {
    double value = 0.0;
    double coverage_left = 0.0;
    double coverage_right = 0.0;
};

inline double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw Error(ErrorKind::shape, "cosine of vectors with different dimensions");
    double uv = 0.0, uu = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        uv += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) throw Error(ErrorKind::degenerate_vector, "cosine of a zero-norm vector");
    return std::clamp(uv / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

/// Best alignment of one word against the non-OOV rows of a sentence.
/// nullopt when the sentence has no usable rows.
inline std::optional<double> word_to_sentence_sim(std::span<const double> w, const SentenceMatrix& s,
                                                  const LexsimOptions& opt = {}) {
    std::optional<double> best;
    for (std::size_t j = 0; j < s.length(); ++j) {
        if (s.oov[j]) continue;
        double c = cosine(w, s.rows.row(j));
        if (opt.clamp_negative) c = std::max(c, 0.0);
        if (!best || c > *best) best = c;
    }
    return best;
}

/// Mean over the usable words of `left` of their best alignment in `right`.
inline std::optional<double> directed_sentence_sim(const SentenceMatrix& left, const SentenceMatrix& right,
                                                   const LexsimOptions& opt = {}) {
    if (left.all_oov() || right.all_oov()) return std::nullopt;
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < left.length(); ++i) {
        if (left.oov[i]) continue;
        sum += *word_to_sentence_sim(left.rows.row(i), right, opt);
        ++n;
    }
    return sum / static_cast<double>(n);
}

/// Symmetric lexical similarity. nullopt is the all-OOV signal.
inline std::optional<LexicalScore> lexical_similarity(const SentenceMatrix& left, const SentenceMatrix& right,
                                                      const LexsimOptions& opt = {}) {
    const auto forward = directed_sentence_sim(left, right, opt);
    const auto backward = directed_sentence_sim(right, left, opt);
    if (!forward || !backward) return std::nullopt;
    // Fixed operand order makes the result bitwise symmetric.
    const double lo = std::min(*forward, *backward);
    const double hi = std::max(*forward, *backward);
    return LexicalScore{(lo + hi) / 2.0, left.coverage(), right.coverage()};
}

} // namespace hybridsim
