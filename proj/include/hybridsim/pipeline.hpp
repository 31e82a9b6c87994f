#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hybridsim/corpus.hpp"
#include "hybridsim/embed.hpp"
#include "hybridsim/evalmetrics.hpp"
#include "hybridsim/fusion.hpp"
#include "hybridsim/lexsim.hpp"
#include "hybridsim/neural/siamese.hpp"
#include "hybridsim/neural/train.hpp"

namespace hybridsim {

struct ScoreOptions {
    TokenizeMode mode = TokenizeMode::whitespace;
    LexsimOptions lexical;
    LayerDivisor layer_divisor = LayerDivisor::layers;
};

/// One output row. sim_d is empty in lexical-only mode.
struct PairScore {
    std::string id;
    std::optional<double> sim_d;
    double sim_w = 0.0;
    double hybrid = 0.0;
    bool lexical_all_oov = false;
    bool deep_unavailable = false;
};

struct ScoreWarnings {
    std::size_t lexical_all_oov = 0;
    std::size_t deep_unavailable = 0;
};

/// Contextual records keyed by `<pair-id>/l` and `<pair-id>/r`.
using ContextualIndex = std::map<std::string, LayeredTokenEmbeddings>;

inline ContextualIndex index_contextual(std::vector<ContextualRecord> records) {
    ContextualIndex idx;
    for (auto& r : records) idx[r.id] = std::move(r.layered);
    return idx;
}

/// Mean of the usable rows of both sentences; stands in for a [CLS] vector
/// when no transformer is available.
inline Vector pooled_pair_vector(const SentenceMatrix& left, const SentenceMatrix& right) {
    if (left.dim() != right.dim()) throw Error(ErrorKind::shape, "sentences differ in embedding dim");
    Vector out(left.dim(), 0.0);
    std::size_t n = 0;
    for (const SentenceMatrix* s : {&left, &right})
        for (std::size_t i = 0; i < s->length(); ++i) {
            if (s->oov[i]) continue;
            auto row = s->rows.row(i);
            for (std::size_t d = 0; d < out.size(); ++d) out[d] += row[d];
            ++n;
        }
    if (n == 0) throw Error(ErrorKind::all_oov, "pair has no usable rows to pool");
    for (double& x : out) x /= static_cast<double>(n);
    return out;
}

namespace detail {

inline const LayeredTokenEmbeddings& contextual_for(const ContextualIndex& idx, const std::string& key) {
    auto it = idx.find(key);
    if (it == idx.end()) throw Error(ErrorKind::join, "no contextual record with id '" + key + "'");
    return it->second;
}

} // namespace detail

/// Deep, lexical and blended similarity for every pair, in input order.
/// `model` may be null (lexical-only). When `contextual` is given, the
/// lexical score uses layer-averaged contextual vectors instead of the table.
inline std::vector<PairScore> score_pairs(const std::vector<SentencePair>& pairs, const EmbeddingTable& table,
                                          const neural::SiameseModel* model, double alpha,
                                          const ScoreOptions& opt = {}, const ContextualIndex* contextual = nullptr,
                                          ScoreWarnings* warnings = nullptr) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::range, "alpha must lie in [0, 1]");
    if (!model && alpha != 0.0) throw Error(ErrorKind::config, "lexical-only scoring requires alpha = 0");

    std::vector<PairScore> out;
    out.reserve(pairs.size());
    ScoreWarnings local;
    for (const auto& p : pairs) {
        const SentenceMatrix left = embed_sentence(table, tokenize(p.left, opt.mode));
        const SentenceMatrix right = embed_sentence(table, tokenize(p.right, opt.mode));

        PairScore s;
        s.id = p.id;
        const LexicalComponent lex =
            contextual ? lexical_component(average_layers(detail::contextual_for(*contextual, p.id + "/l"), opt.layer_divisor),
                                           average_layers(detail::contextual_for(*contextual, p.id + "/r"), opt.layer_divisor),
                                           opt.lexical)
                       : lexical_component(left, right, opt.lexical);
        s.sim_w = lex.value;
        s.lexical_all_oov = lex.all_oov;
        if (lex.all_oov) ++local.lexical_all_oov;

        if (model) {
            const std::size_t need = model->config.min_length();
            if (left.usable() < need || right.usable() < need) {
                s.sim_d = 0.0;
                s.deep_unavailable = true;
                ++local.deep_unavailable;
            } else {
                s.sim_d = neural::score(*model, left.compact(), right.compact());
            }
        }
        s.hybrid = hybrid(s.sim_d.value_or(0.0), s.sim_w, alpha);
        out.push_back(std::move(s));
    }
    if (warnings) *warnings = local;
    return out;
}

inline void write_score_tsv(std::ostream& out, const std::vector<PairScore>& scores) {
    out << "id\tsim_d\tsim_w\thybrid\n";
    for (const auto& s : scores)
        out << s.id << '\t' << (s.sim_d ? detail::format_double(*s.sim_d) : std::string("NA")) << '\t'
            << detail::format_double(s.sim_w) << '\t' << detail::format_double(s.hybrid) << '\n';
}

inline std::vector<PairScore> read_score_tsv(std::istream& in) {
    std::vector<PairScore> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view v(line);
        if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
        if (detail::trim(v).empty() || v.front() == '#') continue;
        if (line_no == 1 && v.substr(0, 3) == "id\t") continue;
        const auto f = detail::split(v, '\t');
        if (f.size() != 4) throw Error(ErrorKind::parse, "score line " + std::to_string(line_no) + ": expected 4 fields", line_no);
        PairScore s;
        s.id = std::string(f[0]);
        auto number = [&](std::string_view field) {
            auto x = detail::parse_double(field);
            if (!x) throw Error(ErrorKind::parse, "score line " + std::to_string(line_no) + ": bad number", line_no);
            return *x;
        };
        if (detail::trim(f[1]) != "NA") s.sim_d = number(f[1]);
        s.sim_w = number(f[2]);
        s.hybrid = number(f[3]);
        out.push_back(std::move(s));
    }
    return out;
}

/// Gold scores in the order of `scores`; throws a join error naming every id
/// that is missing on either side.
inline std::vector<double> join_gold(const std::vector<PairScore>& scores, const std::vector<SentencePair>& pairs) {
    std::map<std::string, double> gold;
    for (const auto& p : pairs) {
        if (!p.gold) throw Error(ErrorKind::data, "pair " + p.id + " has no normalized gold score");
        gold[p.id] = *p.gold;
    }
    std::vector<double> out;
    std::string missing;
    std::map<std::string, bool> seen;
    for (const auto& s : scores) {
        auto it = gold.find(s.id);
        if (it == gold.end()) {
            missing += (missing.empty() ? "" : ",") + s.id;
            continue;
        }
        seen[s.id] = true;
        out.push_back(it->second);
    }
    for (const auto& [id, g] : gold)
        if (!seen.count(id)) missing += (missing.empty() ? "" : ",") + id;
    if (!missing.empty()) throw Error(ErrorKind::join, "ids present in only one of scores/data: " + missing);
    return out;
}

struct ColumnReports {
    std::optional<CorrelationReport> deep;
    CorrelationReport lexical;
    CorrelationReport hybrid;
};

inline ColumnReports evaluate_scores(const std::vector<PairScore>& scores, std::span<const double> gold) {
    std::vector<double> d, w, h;
    bool has_deep = !scores.empty();
    for (const auto& s : scores) {
        has_deep = has_deep && s.sim_d.has_value();
        if (s.sim_d) d.push_back(*s.sim_d);
        w.push_back(s.sim_w);
        h.push_back(s.hybrid);
    }
    ColumnReports r;
    if (has_deep) r.deep = correlate(d, gold);
    r.lexical = correlate(w, gold);
    r.hybrid = correlate(h, gold);
    return r;
}

/// Train on `train`, tune alpha on `dev`, score `test`.
struct ProtocolResult {
    double alpha = 0.0;
    CorrelationReport deep;
    CorrelationReport lexical;
    CorrelationReport hybrid;
    std::vector<double> loss_curve;
};

inline ProtocolResult run_protocol(const neural::ModelConfig& model_cfg, const neural::TrainConfig& train_cfg,
                                   const std::vector<SentencePair>& train, const std::vector<SentencePair>& dev,
                                   const std::vector<SentencePair>& test, const EmbeddingTable& table,
                                   double alpha_step = 0.05, SelectionMetric metric = SelectionMetric::pearson,
                                   const ScoreOptions& opt = {}) {
    const auto prepared = neural::prepare_examples(train, table, model_cfg, opt.mode);
    auto trained = neural::train_siamese(model_cfg, prepared.examples, train_cfg);

    const auto dev_scores = score_pairs(dev, table, &trained.model, 0.0, opt);
    std::vector<double> deep, lex;
    for (const auto& s : dev_scores) {
        deep.push_back(*s.sim_d);
        lex.push_back(s.sim_w);
    }
    const auto dev_gold = join_gold(dev_scores, dev);
    const auto search = select_alpha(deep, lex, dev_gold, alpha_step, metric);

    const auto test_scores = score_pairs(test, table, &trained.model, search.best_alpha, opt);
    const auto reports = evaluate_scores(test_scores, join_gold(test_scores, test));
    return {search.best_alpha, *reports.deep, reports.lexical, reports.hybrid, std::move(trained.epoch_loss)};
}

} // namespace hybridsim
