#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "hybridsim/error.hpp"
#include "hybridsim/neural/siamese.hpp"
#include "hybridsim/neural/train.hpp"

namespace hybridsim::neural {

inline constexpr int checkpoint_format_version = 1;

struct Checkpoint {
    SiameseModel model;
    std::uint64_t seed = 0;
    std::optional<TrainConfig> training;
};

/// JSON checkpoint: architecture tag, hyperparameters, seed and every tensor in
/// declared order. Doubles are written in shortest round-trip form, so
/// save -> load -> save is byte-identical.
inline void save_checkpoint(std::ostream& out, const Checkpoint& ck) {
    using nlohmann::ordered_json;
    const ModelConfig& c = ck.model.config;
    ordered_json j;
    j["format"] = "hybridsim-checkpoint";
    j["format_version"] = checkpoint_format_version;
    j["architecture"] = std::string(to_string(c.arch));
    j["hyperparameters"] = {{"embed_dim", c.embed_dim}, {"hidden", c.hidden},
                            {"bidirectional", c.bidirectional}, {"kernel", c.kernel},
                            {"filters", c.filters}, {"capsule_filters", c.capsule_filters},
                            {"capsules", c.capsules}, {"seq_len", c.seq_len}};
    j["seed"] = ck.seed;
    if (ck.training)
        j["training"] = {{"learning_rate", ck.training->learning_rate},
                         {"epochs", ck.training->epochs},
                         {"batch_size", ck.training->batch_size}};
    auto tensors = ordered_json::array();
    for (const auto& t : ck.model.tensors()) {
        for (double v : t.values)
            if (!std::isfinite(v)) throw Error(ErrorKind::numeric, "refusing to save non-finite weight in " + t.name);
        tensors.push_back({{"name", t.name}, {"shape", t.shape}, {"values", std::vector<double>(t.values.begin(), t.values.end())}});
    }
    j["tensors"] = std::move(tensors);
    out << j.dump(1) << '\n';
}

inline Checkpoint load_checkpoint(std::istream& in) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::format, std::string("checkpoint is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "hybridsim-checkpoint")
            throw Error(ErrorKind::format, "not a hybridsim checkpoint");
        if (j.at("format_version").get<int>() != checkpoint_format_version)
            throw Error(ErrorKind::format, "unsupported checkpoint format version");
        const auto arch = parse_architecture(j.at("architecture").get<std::string>());
        if (!arch) throw Error(ErrorKind::format, "unknown architecture in checkpoint");

        const json& h = j.at("hyperparameters");
        ModelConfig cfg;
        cfg.arch = *arch;
        cfg.embed_dim = h.at("embed_dim").get<std::size_t>();
        cfg.hidden = h.at("hidden").get<std::size_t>();
        cfg.bidirectional = h.at("bidirectional").get<bool>();
        cfg.kernel = h.at("kernel").get<std::size_t>();
        cfg.filters = h.at("filters").get<std::size_t>();
        cfg.capsule_filters = h.at("capsule_filters").get<std::size_t>();
        cfg.capsules = h.at("capsules").get<std::size_t>();
        cfg.seq_len = h.at("seq_len").get<std::size_t>();

        Checkpoint ck;
        ck.model = SiameseModel::zeros(cfg);
        ck.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("training")) {
            const json& t = j["training"];
            TrainConfig tc;
            tc.learning_rate = t.at("learning_rate").get<double>();
            tc.epochs = t.at("epochs").get<std::size_t>();
            tc.batch_size = t.at("batch_size").get<std::size_t>();
            tc.seed = ck.seed;
            ck.training = tc;
        }

        const json& tensors = j.at("tensors");
        auto views = ck.model.tensors();
        if (tensors.size() != views.size()) throw Error(ErrorKind::format, "checkpoint tensor count mismatch");
        for (std::size_t i = 0; i < views.size(); ++i) {
            const json& t = tensors[i];
            if (t.at("name").get<std::string>() != views[i].name)
                throw Error(ErrorKind::format, "expected tensor " + views[i].name);
            if (t.at("shape").get<std::vector<std::size_t>>() != views[i].shape)
                throw Error(ErrorKind::format, "shape mismatch for tensor " + views[i].name);
            const auto values = t.at("values").get<std::vector<double>>();
            if (values.size() != views[i].values.size())
                throw Error(ErrorKind::format, "value count mismatch for tensor " + views[i].name);
            std::copy(values.begin(), values.end(), views[i].values.begin());
        }
        return ck;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::format, std::string("malformed checkpoint: ") + e.what());
    }
}

} // namespace hybridsim::neural
