#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hybridsim/corpus.hpp"
#include "hybridsim/embed.hpp"
#include "hybridsim/error.hpp"
#include "hybridsim/neural/siamese.hpp"
#include "hybridsim/random.hpp"

namespace hybridsim::neural {

/// Plain minibatch SGD on the mean squared error between similarity and gold.
struct TrainConfig {
    double learning_rate = 0.1;
    std::size_t epochs = 30;
    std::uint64_t seed = 0;
    std::size_t batch_size = 8;

    void validate() const {
        if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
            throw Error(ErrorKind::config, "learning rate must be finite and >= 0");
        if (epochs == 0) throw Error(ErrorKind::config, "epochs must be >= 1");
        if (batch_size == 0) throw Error(ErrorKind::config, "batch size must be >= 1");
    }
};

struct TrainingExample {
    std::string id;
    Matrix left;
    Matrix right;
    double gold = 0.0;
};

struct PreparedData {
    std::vector<TrainingExample> examples;
    std::size_t skipped_all_oov = 0;
    std::size_t skipped_too_short = 0;
};

/// Embeds both sides of every pair, keeping only the non-OOV rows. Pairs the
/// architecture cannot encode are counted and skipped.
inline PreparedData prepare_examples(const std::vector<SentencePair>& pairs, const EmbeddingTable& table,
                                     const ModelConfig& cfg, TokenizeMode mode = TokenizeMode::whitespace) {
    PreparedData out;
    for (const auto& p : pairs) {
        if (!p.gold) throw Error(ErrorKind::data, "pair " + p.id + " has no normalized gold score");
        const SentenceMatrix l = embed_sentence(table, tokenize(p.left, mode));
        const SentenceMatrix r = embed_sentence(table, tokenize(p.right, mode));
        if (l.all_oov() || r.all_oov()) {
            ++out.skipped_all_oov;
            continue;
        }
        if (l.usable() < cfg.min_length() || r.usable() < cfg.min_length()) {
            ++out.skipped_too_short;
            continue;
        }
        out.examples.push_back({p.id, l.compact(), r.compact(), *p.gold});
    }
    return out;
}

struct TrainResult {
    SiameseModel model;
    std::vector<double> epoch_loss;  // mean per-pair loss seen during each epoch
};

inline TrainResult train_siamese(SiameseModel model, const std::vector<TrainingExample>& data, const TrainConfig& cfg) {
    cfg.validate();
    if (data.empty()) throw Error(ErrorKind::data, "no usable training pairs");

    Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    TrainResult result;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        double total = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            const double weight = 1.0 / static_cast<double>(end - start);
            SiameseModel grad = model.zeros_like();
            for (std::size_t k = start; k < end; ++k) {
                const auto& ex = data[order[k]];
                total += loss_and_gradient(model, ex.left, ex.right, ex.gold, grad, weight);
            }
            sgd_step(model, grad, cfg.learning_rate);
        }
        const double mean = total / static_cast<double>(data.size());
        if (!std::isfinite(mean))
            throw Error(ErrorKind::divergence, "training diverged at epoch " + std::to_string(epoch));
        for (const auto& t : model.tensors())
            for (double v : t.values)
                if (!std::isfinite(v))
                    throw Error(ErrorKind::divergence,
                                "non-finite weight in " + t.name + " at epoch " + std::to_string(epoch));
        result.epoch_loss.push_back(mean);
    }
    result.model = std::move(model);
    return result;
}

/// Seeds the weights from cfg.seed, then trains.
inline TrainResult train_siamese(const ModelConfig& model_cfg, const std::vector<TrainingExample>& data,
                                 const TrainConfig& cfg) {
    return train_siamese(SiameseModel::initialize(model_cfg, cfg.seed), data, cfg);
}

struct DenseExample {
    Vector pooled;
    double gold = 0.0;
};

/// Full-batch gradient descent for the sigmoid head; returns the per-epoch mean loss.
inline std::vector<double> dense_train(DenseHead& head, const std::vector<DenseExample>& data, const TrainConfig& cfg) {
    cfg.validate();
    if (data.empty()) throw Error(ErrorKind::data, "no usable training pairs");
    std::vector<double> losses;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        DenseHead grad{Vector(head.input_dim(), 0.0), 0.0};
        double total = 0.0;
        for (const auto& ex : data) total += dense_loss_and_gradient(head, ex.pooled, ex.gold, grad);
        const double n = static_cast<double>(data.size());
        for (std::size_t i = 0; i < head.w.size(); ++i) head.w[i] -= cfg.learning_rate * grad.w[i] / n;
        head.b -= cfg.learning_rate * grad.b / n;
        if (!std::isfinite(total))
            throw Error(ErrorKind::divergence, "training diverged at epoch " + std::to_string(epoch));
        losses.push_back(total / n);
    }
    return losses;
}

} // namespace hybridsim::neural
