#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <limits>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hybridsim/hybridsim.hpp"

using namespace hybridsim;
using ojson = nlohmann::ordered_json;

namespace {

const auto at_least_one = CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max());

struct InputFile {
    std::string path;
    std::string bytes;
};

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

class Run {
public:
    explicit Run(std::string command) : command_(std::move(command)) {}

    const std::string& read(const std::string& role, const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(ErrorKind::io, "cannot open " + role + " file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        inputs_[role] = {path, ss.str()};
        return inputs_[role].bytes;
    }

    ojson& config() { return config_; }
    void set_seed(std::uint64_t seed) { seed_ = seed; }

    void write_output(const std::string& path, const std::string& contents) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
        out << contents;
        if (!out) throw Error(ErrorKind::io, "write to '" + path + "' failed");
    }

    void write_manifest(const std::string& out_path) const {
        ojson m;
        m["command"] = command_;
        m["version"] = HYBRIDSIM_VERSION;
        m["seed"] = seed_ ? ojson(*seed_) : ojson(nullptr);
        m["config"] = config_;
        ojson inputs = ojson::object();
        for (const auto& [role, f] : inputs_) inputs[role] = {{"path", f.path}, {"sha256", sha256_hex(f.bytes)}};
        m["inputs"] = inputs;
        write_output(out_path + ".manifest.json", m.dump(2) + "\n");
    }

private:
    std::string command_;
    std::optional<std::uint64_t> seed_;
    ojson config_ = ojson::object();
    std::map<std::string, InputFile> inputs_;
};

struct CommonOptions {
    double score_min = 0.0;
    double score_max = 5.0;
    bool clamp_cosine = true;
    std::string layer_divisor = "T";
    bool pretokenized = false;

    void add_to(CLI::App* app, bool scoring) {
        app->add_option("--score-min", score_min, "Lower end of the raw gold scale")->capture_default_str();
        app->add_option("--score-max", score_max, "Upper end of the raw gold scale")->capture_default_str();
        app->add_flag("--pretokenized", pretokenized, "Sentences are already split on single spaces");
        if (scoring) {
            app->add_flag("--clamp-cosine,!--no-clamp-cosine", clamp_cosine,
                          "Clamp negative word alignments to 0 (default on)");
            app->add_option("--layer-divisor", layer_divisor, "Divide summed contextual layers by T (layers) or L (tokens)")
                ->check(CLI::IsMember({"T", "L"}))
                ->capture_default_str();
        }
    }

    ScoreOptions score_options() const {
        ScoreOptions o;
        o.mode = pretokenized ? TokenizeMode::pretokenized : TokenizeMode::whitespace;
        o.lexical.clamp_negative = clamp_cosine;
        o.layer_divisor = layer_divisor == "L" ? LayerDivisor::tokens : LayerDivisor::layers;
        return o;
    }

    void record(ojson& cfg, bool scoring) const {
        cfg["score_min"] = score_min;
        cfg["score_max"] = score_max;
        cfg["pretokenized"] = pretokenized;
        if (scoring) {
            cfg["clamp_cosine"] = clamp_cosine;
            cfg["layer_divisor"] = layer_divisor;
        }
    }
};

std::vector<SentencePair> load_pairs(Run& run, const std::string& role, const std::string& path,
                                     const CommonOptions& common) {
    std::istringstream in(run.read(role, path));
    return normalize_scores(parse_sts_tsv(in, ScoreRange{common.score_min, common.score_max}), common.score_min,
                            common.score_max);
}

EmbeddingTable load_table(Run& run, const std::string& path) {
    std::istringstream in(run.read("embeddings", path));
    return load_word2vec_text(in);
}

void report_warnings(const ScoreWarnings& w) {
    if (w.lexical_all_oov)
        std::cerr << "warning: " << w.lexical_all_oov << " pair(s) had an all-OOV side; sim_w set to 0\n";
    if (w.deep_unavailable)
        std::cerr << "warning: " << w.deep_unavailable
                  << " pair(s) too short or all-OOV for the deep encoder; sim_d set to 0\n";
}

std::string format_report_table(const std::vector<std::pair<std::string, CorrelationReport>>& rows) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %-22s %-22s %s\n", "column", "pearson", "spearman", "n");
    out << line;
    for (const auto& [name, r] : rows) {
        std::snprintf(line, sizeof line, "%-8s %-22.17g %-22.17g %zu\n", name.c_str(), r.pearson, r.spearman, r.n);
        out << line;
    }
    return out.str();
}

ojson report_json(const CorrelationReport& r) {
    return {{"pearson", r.pearson}, {"spearman", r.spearman}, {"n", r.n}};
}

neural::Architecture architecture(const std::string& tag) {
    const auto arch = neural::parse_architecture(tag);
    if (!arch) throw Error(ErrorKind::config, "unknown architecture '" + tag + "'");
    return *arch;
}

// score ----------------------------------------------------------------------

struct ScoreArgs {
    std::string data, embeddings, contextual, model = "lexical-only", out;
    std::optional<double> alpha;
    CommonOptions common;
};

int cmd_score(const ScoreArgs& a) {
    Run run("score");
    const auto pairs = load_pairs(run, "data", a.data, a.common);
    const auto table = load_table(run, a.embeddings);

    std::optional<neural::Checkpoint> ck;
    if (a.model != "lexical-only") {
        std::istringstream in(run.read("model", a.model));
        ck = neural::load_checkpoint(in);
        if (ck->model.config.embed_dim != table.dim())
            throw Error(ErrorKind::config, "model expects embedding dim " + std::to_string(ck->model.config.embed_dim) +
                                               ", table has " + std::to_string(table.dim()));
    }
    const double alpha = a.alpha.value_or(ck ? 0.5 : 0.0);

    std::optional<ContextualIndex> ctx;
    if (!a.contextual.empty()) {
        std::istringstream in(run.read("contextual", a.contextual));
        ctx = index_contextual(load_contextual_jsonl(in));
    }

    ScoreWarnings warnings;
    const auto scores = score_pairs(pairs, table, ck ? &ck->model : nullptr, alpha, a.common.score_options(),
                                    ctx ? &*ctx : nullptr, &warnings);
    report_warnings(warnings);

    std::ostringstream tsv;
    write_score_tsv(tsv, scores);
    auto& cfg = run.config();
    cfg["model"] = a.model;
    cfg["alpha"] = alpha;
    cfg["contextual"] = !a.contextual.empty();
    a.common.record(cfg, true);
    run.write_output(a.out, tsv.str());
    run.write_manifest(a.out);
    return 0;
}

// train ----------------------------------------------------------------------

struct ModelArgs {
    std::string arch = "lstm";
    std::size_t hidden = 8;
    bool bidirectional = false;
    std::size_t kernel = 3;
    std::size_t filters = 8;
    std::size_t capsules = 2;
    std::size_t capsule_filters = 8;
    std::size_t seq_len = 8;
    std::size_t epochs = 30;
    double lr = 0.1;
    std::uint64_t seed = 0;
    std::size_t batch_size = 8;

    void add_to(CLI::App* app) {
        app->add_option("--arch", arch, "Encoder: lstm, gru, cnn-lstm, gcnn-gru, capsule")
            ->check(CLI::IsMember({"lstm", "gru", "cnn-lstm", "gcnn-gru", "capsule"}))
            ->capture_default_str();
        app->add_option("--hidden", hidden, "Recurrent hidden size")->check(at_least_one)->capture_default_str();
        app->add_flag("--bidirectional", bidirectional, "Concatenate forward and backward recurrent states");
        app->add_option("--kernel", kernel, "Convolution kernel size (odd)")->check(at_least_one)->capture_default_str();
        app->add_option("--filters", filters, "Convolution filter count")->check(at_least_one)->capture_default_str();
        app->add_option("--capsules", capsules, "Capsule count C")->check(at_least_one)->capture_default_str();
        app->add_option("--capsule-filters", capsule_filters, "Second capsule convolution filter count")
            ->check(at_least_one)
            ->capture_default_str();
        app->add_option("--seq-len", seq_len, "Capsule input length (pad or truncate)")
            ->check(at_least_one)
            ->capture_default_str();
        app->add_option("--epochs", epochs, "Training epochs (>= 1)")->check(at_least_one)->capture_default_str();
        app->add_option("--lr", lr, "SGD learning rate")->check(CLI::NonNegativeNumber)->capture_default_str();
        app->add_option("--seed", seed, "Seed for initialization and shuffling")->capture_default_str();
        app->add_option("--batch-size", batch_size, "Minibatch size")->check(at_least_one)->capture_default_str();
    }

    neural::ModelConfig model_config(std::size_t embed_dim) const {
        neural::ModelConfig c;
        c.arch = architecture(arch);
        c.embed_dim = embed_dim;
        c.hidden = hidden;
        c.bidirectional = bidirectional;
        c.kernel = kernel;
        c.filters = filters;
        c.capsules = capsules;
        c.capsule_filters = capsule_filters;
        c.seq_len = seq_len;
        c.validate();
        return c;
    }

    neural::TrainConfig train_config(std::uint64_t run_seed) const { return {lr, epochs, run_seed, batch_size}; }

    void record(ojson& cfg) const {
        cfg["arch"] = arch;
        cfg["hidden"] = hidden;
        cfg["bidirectional"] = bidirectional;
        cfg["kernel"] = kernel;
        cfg["filters"] = filters;
        cfg["capsules"] = capsules;
        cfg["capsule_filters"] = capsule_filters;
        cfg["seq_len"] = seq_len;
        cfg["epochs"] = epochs;
        cfg["lr"] = lr;
        cfg["batch_size"] = batch_size;
    }
};

struct TrainArgs {
    std::string data, embeddings, out;
    ModelArgs model;
    CommonOptions common;
};

int cmd_train(const TrainArgs& a) {
    Run run("train");
    const auto pairs = load_pairs(run, "data", a.data, a.common);
    const auto table = load_table(run, a.embeddings);
    const auto mcfg = a.model.model_config(table.dim());
    const auto tcfg = a.model.train_config(a.model.seed);

    const auto prepared = neural::prepare_examples(
        pairs, table, mcfg, a.common.pretokenized ? TokenizeMode::pretokenized : TokenizeMode::whitespace);
    if (prepared.skipped_all_oov)
        std::cerr << "warning: skipped " << prepared.skipped_all_oov << " pair(s) with an all-OOV side\n";
    if (prepared.skipped_too_short)
        std::cerr << "warning: skipped " << prepared.skipped_too_short << " pair(s) shorter than the encoder needs\n";
    const auto result = neural::train_siamese(mcfg, prepared.examples, tcfg);

    std::ostringstream ck;
    neural::save_checkpoint(ck, {result.model, a.model.seed, tcfg});
    std::ostringstream loss;
    loss << "epoch,loss\n";
    for (std::size_t e = 0; e < result.epoch_loss.size(); ++e)
        loss << e + 1 << ',' << detail::format_double(result.epoch_loss[e]) << '\n';

    run.set_seed(a.model.seed);
    a.model.record(run.config());
    a.common.record(run.config(), false);
    run.config()["training_pairs"] = prepared.examples.size();
    run.write_output(a.out, ck.str());
    run.write_output(a.out + ".loss.csv", loss.str());
    run.write_manifest(a.out);
    return 0;
}

// tune-alpha -----------------------------------------------------------------

struct TuneArgs {
    std::string scores, data, out, metric = "pearson";
    double step = 0.05;
    CommonOptions common;
};

std::vector<PairScore> load_scores(Run& run, const std::string& path) {
    std::istringstream in(run.read("scores", path));
    return read_score_tsv(in);
}

int cmd_tune_alpha(const TuneArgs& a) {
    Run run("tune-alpha");
    const auto scores = load_scores(run, a.scores);
    const auto pairs = load_pairs(run, "data", a.data, a.common);
    const auto gold = join_gold(scores, pairs);
    std::vector<double> deep, lex;
    for (const auto& s : scores) {
        if (!s.sim_d) throw Error(ErrorKind::data, "pair " + s.id + " has no sim_d; score with a model first");
        deep.push_back(*s.sim_d);
        lex.push_back(s.sim_w);
    }
    const auto metric = a.metric == "spearman" ? SelectionMetric::spearman : SelectionMetric::pearson;
    const auto result = select_alpha(deep, lex, gold, a.step, metric);
    std::cout << "alpha " << detail::format_double(result.best_alpha) << '\n';
    if (result.ties > 1) std::cerr << "warning: " << result.ties << " grid points tie; the largest alpha was kept\n";

    if (!a.out.empty()) {
        std::ostringstream csv;
        write_alpha_grid_csv(csv, result);
        run.config()["alpha_step"] = a.step;
        run.config()["metric"] = a.metric;
        run.config()["best_alpha"] = result.best_alpha;
        a.common.record(run.config(), false);
        run.write_output(a.out, csv.str());
        run.write_manifest(a.out);
    }
    return 0;
}

// eval -----------------------------------------------------------------------

struct EvalArgs {
    std::string scores, data, out, train, dev, embeddings, metric = "pearson";
    std::size_t runs = 0;
    double step = 0.05;
    ModelArgs model;
    CommonOptions common;
};

int eval_scores(const EvalArgs& a) {
    Run run("eval");
    const auto scores = load_scores(run, a.scores);
    const auto pairs = load_pairs(run, "data", a.data, a.common);
    const auto reports = evaluate_scores(scores, join_gold(scores, pairs));

    std::vector<std::pair<std::string, CorrelationReport>> rows;
    if (reports.deep) rows.emplace_back("sim_d", *reports.deep);
    rows.emplace_back("sim_w", reports.lexical);
    rows.emplace_back("hybrid", reports.hybrid);
    std::cout << format_report_table(rows);

    ojson j = ojson::object();
    for (const auto& [name, r] : rows) j[name] = report_json(r);
    std::cout << j.dump() << '\n';
    if (!a.out.empty()) {
        a.common.record(run.config(), false);
        run.write_output(a.out, j.dump(2) + "\n");
        run.write_manifest(a.out);
    }
    return 0;
}

int eval_protocol(const EvalArgs& a) {
    if (a.train.empty() || a.dev.empty() || a.embeddings.empty())
        throw Error(ErrorKind::config, "--runs needs --train, --dev, --data (test split) and --embeddings");
    Run run("eval");
    const auto train = load_pairs(run, "train", a.train, a.common);
    const auto dev = load_pairs(run, "dev", a.dev, a.common);
    const auto test = load_pairs(run, "data", a.data, a.common);
    const auto table = load_table(run, a.embeddings);
    const auto mcfg = a.model.model_config(table.dim());
    const auto metric = a.metric == "spearman" ? SelectionMetric::spearman : SelectionMetric::pearson;

    ojson runs = ojson::array();
    double sums[7] = {};
    for (std::size_t k = 0; k < a.runs; ++k) {
        const std::uint64_t seed = a.model.seed + k;
        const auto r = run_protocol(mcfg, a.model.train_config(seed), train, dev, test, table, a.step, metric,
                                    a.common.score_options());
        const double vals[7] = {r.alpha,           r.deep.pearson,   r.deep.spearman, r.lexical.pearson,
                                r.lexical.spearman, r.hybrid.pearson, r.hybrid.spearman};
        for (int i = 0; i < 7; ++i) sums[i] += vals[i];
        runs.push_back({{"seed", seed},
                        {"alpha", r.alpha},
                        {"sim_d", report_json(r.deep)},
                        {"sim_w", report_json(r.lexical)},
                        {"hybrid", report_json(r.hybrid)}});
        std::cerr << "run seed " << seed << ": alpha " << detail::format_double(r.alpha) << ", hybrid pearson "
                  << detail::format_double(r.hybrid.pearson) << '\n';
    }
    const double n = static_cast<double>(a.runs);
    const std::size_t test_n = test.size();
    const CorrelationReport deep{sums[1] / n, sums[2] / n, test_n};
    const CorrelationReport lex{sums[3] / n, sums[4] / n, test_n};
    const CorrelationReport hyb{sums[5] / n, sums[6] / n, test_n};
    std::cout << "mean over " << a.runs << " run(s), alpha " << detail::format_double(sums[0] / n) << '\n';
    std::cout << format_report_table({{"sim_d", deep}, {"sim_w", lex}, {"hybrid", hyb}});

    ojson j;
    j["runs"] = runs;
    j["mean"] = {{"alpha", sums[0] / n}, {"sim_d", report_json(deep)}, {"sim_w", report_json(lex)}, {"hybrid", report_json(hyb)}};
    std::cout << j["mean"].dump() << '\n';
    if (!a.out.empty()) {
        run.set_seed(a.model.seed);
        a.model.record(run.config());
        a.common.record(run.config(), true);
        run.config()["runs"] = a.runs;
        run.config()["alpha_step"] = a.step;
        run.config()["metric"] = a.metric;
        run.write_output(a.out, j.dump(2) + "\n");
        run.write_manifest(a.out);
    }
    return 0;
}

// gradcheck ------------------------------------------------------------------

struct GradArgs {
    std::string arch = "lstm", out;
    std::uint64_t seed = 0;
    std::size_t configs = 0;
    double corrupt = 0.0;
};

int cmd_gradcheck(const GradArgs& a) {
    constexpr double tolerance = 1e-4;
    const auto arch = architecture(a.arch);
    double worst = 0.0;
    std::string where;
    ojson cases = ojson::array();
    auto check = [&](const neural::GradCheckCase& c, std::uint64_t seed) {
        const auto r = neural::grad_check_siamese(c, 1e-5, a.corrupt);
        std::cout << "arch " << a.arch << " seed " << seed << " parameters " << r.parameters
                  << " max_relative_error " << detail::format_double(r.max_relative_error) << " worst "
                  << r.worst_parameter << '\n';
        cases.push_back({{"seed", seed}, {"max_relative_error", r.max_relative_error}, {"worst", r.worst_parameter}});
        if (r.max_relative_error >= worst) {
            worst = r.max_relative_error;
            where = r.worst_parameter;
        }
    };
    if (a.configs == 0) {
        check(neural::default_gradcheck_case(arch, a.seed), a.seed);
    } else {
        for (std::size_t i = 0; i < a.configs; ++i)
            check(neural::random_gradcheck_case(arch, a.seed + i), a.seed + i);
    }
    if (!a.out.empty()) {
        Run run("gradcheck");
        run.set_seed(a.seed);
        run.config()["arch"] = a.arch;
        run.config()["configs"] = a.configs;
        run.config()["corrupt_gradient"] = a.corrupt;
        ojson j{{"cases", cases}, {"max_relative_error", worst}, {"tolerance", tolerance}};
        run.write_output(a.out, j.dump(2) + "\n");
        run.write_manifest(a.out);
    }
    if (worst >= tolerance) {
        std::cerr << "error: numeric: gradient mismatch " << detail::format_double(worst) << " >= 1e-4 at " << where
                  << '\n';
        return 2;
    }
    return 0;
}

int exit_code_for(ErrorKind k) {
    switch (k) {
    case ErrorKind::divergence:
    case ErrorKind::numeric: return 2;
    default: return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid deep/lexical sentence similarity toolkit"};
    app.set_version_flag("--version", HYBRIDSIM_VERSION);
    app.require_subcommand(1);

    ScoreArgs score;
    auto* s = app.add_subcommand("score", "Score sentence pairs with the deep, lexical and hybrid similarities");
    s->add_option("--data", score.data, "STS TSV: left, right, gold")->required();
    s->add_option("--embeddings", score.embeddings, "Word2Vec text embeddings")->required();
    s->add_option("--contextual", score.contextual, "JSONL layered contextual states for the lexical score");
    s->add_option("--model", score.model, "Checkpoint path or 'lexical-only'")->capture_default_str();
    s->add_option("--alpha", score.alpha, "Deep weight in [0, 1] (default 0.5 with a model, 0 otherwise)")
        ->check(CLI::Range(0.0, 1.0));
    s->add_option("--out", score.out, "Output TSV")->required();
    score.common.add_to(s, true);

    TrainArgs train;
    auto* t = app.add_subcommand("train", "Train a siamese encoder");
    t->add_option("--data", train.data, "Training STS TSV")->required();
    t->add_option("--embeddings", train.embeddings, "Word2Vec text embeddings")->required();
    t->add_option("--out", train.out, "Checkpoint path")->required();
    train.model.add_to(t);
    train.common.add_to(t, false);

    TuneArgs tune;
    auto* ta = app.add_subcommand("tune-alpha", "Grid-search the deep weight on a scored dev split");
    ta->add_option("--scores", tune.scores, "Score TSV written by 'score' with a model")->required();
    ta->add_option("--data", tune.data, "Dev STS TSV with gold scores")->required();
    ta->add_option("--alpha-step", tune.step, "Grid step")->check(CLI::Range(1e-9, 0.5))->capture_default_str();
    ta->add_option("--metric", tune.metric, "Selection metric")
        ->check(CLI::IsMember({"pearson", "spearman"}))
        ->capture_default_str();
    ta->add_option("--out", tune.out, "Grid CSV");
    tune.common.add_to(ta, false);

    EvalArgs eval;
    auto* e = app.add_subcommand("eval", "Correlate scores with gold, or run the train/tune/test protocol");
    e->add_option("--scores", eval.scores, "Score TSV to evaluate");
    e->add_option("--data", eval.data, "Gold STS TSV (the test split with --runs)")->required();
    e->add_option("--runs", eval.runs, "Run the full protocol for seeds seed..seed+runs-1 and report means")
        ->check(at_least_one);
    e->add_option("--train", eval.train, "Training split for --runs");
    e->add_option("--dev", eval.dev, "Dev split for --runs");
    e->add_option("--embeddings", eval.embeddings, "Word2Vec text embeddings for --runs");
    e->add_option("--alpha-step", eval.step, "Grid step")->check(CLI::Range(1e-9, 0.5))->capture_default_str();
    e->add_option("--metric", eval.metric, "Selection metric")
        ->check(CLI::IsMember({"pearson", "spearman"}))
        ->capture_default_str();
    e->add_option("--out", eval.out, "JSON report path");
    eval.model.add_to(e);
    eval.common.add_to(e, true);

    GradArgs grad;
    auto* g = app.add_subcommand("gradcheck", "Compare analytic gradients with central differences");
    g->add_option("--arch", grad.arch, "Encoder architecture")
        ->check(CLI::IsMember({"lstm", "gru", "cnn-lstm", "gcnn-gru", "capsule"}))
        ->capture_default_str();
    g->add_option("--seed", grad.seed, "Case seed")->capture_default_str();
    g->add_option("--configs", grad.configs, "Check this many random small configurations instead of the default one");
    g->add_option("--corrupt-gradient", grad.corrupt, "Add this to the first analytic component (negative control)");
    g->add_option("--out", grad.out, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::CallForAllHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::CallForVersion& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        std::cerr << "error: usage: " << ex.what() << '\n';
        return 1;
    }

    try {
        if (*s) return cmd_score(score);
        if (*t) return cmd_train(train);
        if (*ta) return cmd_tune_alpha(tune);
        if (*e) {
            if (eval.runs > 0) return eval_protocol(eval);
            if (eval.scores.empty()) throw Error(ErrorKind::config, "eval needs --scores, or --runs for the protocol");
            return eval_scores(eval);
        }
        if (*g) return cmd_gradcheck(grad);
    } catch (const Error& ex) {
        std::cerr << "error: " << to_string(ex.kind()) << ": " << ex.what() << '\n';
        return exit_code_for(ex.kind());
    } catch (const std::exception& ex) {
        std::cerr << "error: internal: " << ex.what() << '\n';
        return 3;
    }
    return 3;
}
