// Generates a synthetic STS corpus whose gold score mixes bag-of-words overlap
// with word-order agreement, plus matching word vectors.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hybridsim/corpus.hpp"
#include "hybridsim/random.hpp"

namespace {

struct Pair {
    std::vector<std::size_t> left, right;
    double gold;
};

std::string word(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "w%02zu", i);
    return buf;
}

std::string sentence(const std::vector<std::size_t>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? " " : "") + word(ids[i]);
    return out;
}

// Fraction of ordered position pairs among kept tokens whose order survived.
double order_agreement(const std::vector<std::size_t>& kept_positions) {
    const std::size_t n = kept_positions.size();
    if (n < 2) return 1.0;
    std::size_t agree = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            ++total;
            if (kept_positions[i] < kept_positions[j]) ++agree;
        }
    return static_cast<double>(agree) / static_cast<double>(total);
}

Pair make_pair(hybridsim::Rng& rng, std::size_t vocab, double noise) {
    Pair p;
    const std::size_t len = 5 + rng.below(5);
    for (std::size_t i = 0; i < len; ++i) p.left.push_back(rng.below(vocab));

    // Keep a random subset of left tokens (with their left positions), fill the rest with fresh words.
    const double keep_prob = rng.uniform01();
    std::vector<std::pair<std::size_t, std::size_t>> slots;  // (left position or npos, word)
    for (std::size_t i = 0; i < len; ++i) {
        if (rng.uniform01() < keep_prob) slots.emplace_back(i, p.left[i]);
        else slots.emplace_back(std::size_t(-1), rng.below(vocab));
    }
    // Scramble: a random number of random transpositions.
    const std::size_t swaps = rng.below(len + 1);
    for (std::size_t s = 0; s < swaps; ++s) std::swap(slots[rng.below(len)], slots[rng.below(len)]);

    std::vector<std::size_t> kept;
    for (const auto& [pos, w] : slots) {
        p.right.push_back(w);
        if (pos != std::size_t(-1)) kept.push_back(pos);
    }
    const double overlap = static_cast<double>(kept.size()) / static_cast<double>(len);
    const double order = kept.empty() ? 0.0 : order_agreement(kept);
    const double raw = 5.0 * (0.5 * overlap + 0.5 * order * overlap) + rng.uniform(-noise, noise);
    p.gold = std::clamp(raw, 0.0, 5.0);
    return p;
}

void write_split(const std::filesystem::path& path, const std::vector<Pair>& pairs, std::size_t from, std::size_t to) {
    std::ofstream out(path, std::ios::binary);
    for (std::size_t i = from; i < to; ++i) {
        char gold[32];
        std::snprintf(gold, sizeof gold, "%.4f", pairs[i].gold);
        out << sentence(pairs[i].left) << '\t' << sentence(pairs[i].right) << '\t' << gold << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Write a synthetic STS corpus (train/dev/test TSV) and word2vec embeddings"};
    std::string out_dir = "data/synthetic";
    std::size_t pairs = 500, vocab = 60, dim = 16;
    std::uint64_t seed = 2024;
    double noise = 0.25;
    app.add_option("--out-dir", out_dir)->capture_default_str();
    app.add_option("--pairs", pairs)->check(CLI::Range(10, 1000000))->capture_default_str();
    app.add_option("--vocab", vocab)->check(CLI::Range(2, 100))->capture_default_str();
    app.add_option("--dim", dim)->check(CLI::Range(1, 1024))->capture_default_str();
    app.add_option("--seed", seed)->capture_default_str();
    app.add_option("--noise", noise, "Half-width of uniform gold noise")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    hybridsim::Rng rng(seed);
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream emb(std::filesystem::path(out_dir) / "embeddings.txt", std::ios::binary);
        emb << vocab << ' ' << dim << '\n';
        for (std::size_t i = 0; i < vocab; ++i) {
            emb << word(i);
            for (std::size_t d = 0; d < dim; ++d) {
                char v[32];
                std::snprintf(v, sizeof v, " %.6f", rng.uniform(-1.0, 1.0));
                emb << v;
            }
            emb << '\n';
        }
    }
    std::vector<Pair> all;
    for (std::size_t i = 0; i < pairs; ++i) all.push_back(make_pair(rng, vocab, noise));
    const std::size_t n_train = pairs * 6 / 10, n_dev = pairs * 2 / 10;
    write_split(std::filesystem::path(out_dir) / "train.tsv", all, 0, n_train);
    write_split(std::filesystem::path(out_dir) / "dev.tsv", all, n_train, n_train + n_dev);
    write_split(std::filesystem::path(out_dir) / "test.tsv", all, n_train + n_dev, pairs);
    return 0;
}
