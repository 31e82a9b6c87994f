#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "hybridsim/corpus.hpp"
#include "hybridsim/error.hpp"
#include "hybridsim/matrix.hpp"

namespace hybridsim {

/// Static word vectors. Immutable after loading; rows are kept in file order
/// so serialization is deterministic.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return tokens_.size(); }
    std::size_t duplicate_count() const noexcept { return duplicates_; }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }

    /// Inserts or overwrites (last wins, counted as a duplicate).
    void insert(const std::string& token, std::span<const double> vec) {
        if (vec.size() != dim_) throw Error(ErrorKind::shape, "vector for '" + token + "' has wrong dimension");
        if (auto it = index_.find(token); it != index_.end()) {
            ++duplicates_;
            std::copy(vec.begin(), vec.end(), rows_.begin() + static_cast<std::ptrdiff_t>(it->second * dim_));
            return;
        }
        index_.emplace(token, tokens_.size());
        tokens_.push_back(token);
        rows_.insert(rows_.end(), vec.begin(), vec.end());
    }

    /// Exact-match lookup; no trimming or case folding.
    std::optional<std::span<const double>> lookup(std::string_view token) const {
        auto it = index_.find(std::string(token));
        if (it == index_.end()) return std::nullopt;
        return std::span<const double>(rows_.data() + it->second * dim_, dim_);
    }

private:
    std::size_t dim_ = 0;
    std::size_t duplicates_ = 0;
    std::vector<std::string> tokens_;
    std::vector<double> rows_;
    std::unordered_map<std::string, std::size_t> index_;
};

inline std::optional<std::span<const double>> lookup(const EmbeddingTable& table, std::string_view token) {
    return table.lookup(token);
}

/// Word2Vec text format: header `<vocab_size> <dim>`, then one
/// `<token> <v1> ... <v_dim>` line per entry. Tokens are NFC-normalized.
inline EmbeddingTable load_word2vec_text(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::format, "missing header line", 1);
    std::vector<std::string_view> header;
    {
        std::string_view v = detail::trim(line);
        std::size_t i = 0;
        while (i < v.size()) {
            while (i < v.size() && detail::is_ascii_space(v[i])) ++i;
            const std::size_t s = i;
            while (i < v.size() && !detail::is_ascii_space(v[i])) ++i;
            if (i > s) header.push_back(v.substr(s, i - s));
        }
    }
    std::size_t vocab = 0, dim = 0;
    auto parse_count = [](std::string_view s, std::size_t& out) {
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc{} && p == s.data() + s.size();
    };
    if (header.size() != 2 || !parse_count(header[0], vocab) || !parse_count(header[1], dim) || dim == 0)
        throw Error(ErrorKind::format, "header must be '<vocab_size> <dim>' with dim > 0", 1);

    EmbeddingTable table(dim);
    std::vector<double> vec(dim);
    std::size_t line_no = 1;
    std::size_t entries = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view v(line);
        if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
        if (detail::trim(v).empty()) continue;
        if (entries == vocab)
            throw Error(ErrorKind::format, "more entries than header vocab_size " + std::to_string(vocab), line_no);

        std::size_t i = 0;
        while (i < v.size() && detail::is_ascii_space(v[i])) ++i;
        const std::size_t tok_start = i;
        while (i < v.size() && !detail::is_ascii_space(v[i])) ++i;
        const std::string token = nfc(v.substr(tok_start, i - tok_start));

        std::size_t count = 0;
        while (i < v.size()) {
            while (i < v.size() && detail::is_ascii_space(v[i])) ++i;
            const std::size_t s = i;
            while (i < v.size() && !detail::is_ascii_space(v[i])) ++i;
            if (i == s) break;
            if (count == dim)
                throw Error(ErrorKind::format, "line " + std::to_string(line_no) + ": more than " +
                                                   std::to_string(dim) + " components", line_no);
            const auto value = detail::parse_double(v.substr(s, i - s));
            if (!value)
                throw Error(ErrorKind::format, "line " + std::to_string(line_no) + ": non-numeric component", line_no);
            vec[count++] = *value;
        }
        if (count != dim)
            throw Error(ErrorKind::format, "line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                                               " components, got " + std::to_string(count), line_no);
        table.insert(token, vec);
        ++entries;
    }
    if (entries != vocab)
        throw Error(ErrorKind::format, "header declares " + std::to_string(vocab) + " entries, file has " +
                                           std::to_string(entries), line_no);
    return table;
}

inline void write_word2vec_text(std::ostream& out, const EmbeddingTable& table) {
    out << table.size() << ' ' << table.dim() << '\n';
    for (const auto& token : table.tokens()) {
        out << token;
        const auto row = *table.lookup(token);
        for (double x : row) out << ' ' << detail::format_double(x);
        out << '\n';
    }
}

/// Token rows of one sentence plus a mask of rows with no embedding.
/// Masked rows hold zeros and must never enter a similarity computation.
struct SentenceMatrix {
    Matrix rows;
    std::vector<bool> oov;

    static SentenceMatrix dense(Matrix m) {
        SentenceMatrix s;
        s.oov.assign(m.rows, false);
        s.rows = std::move(m);
        return s;
    }

    std::size_t length() const noexcept { return rows.rows; }
    std::size_t dim() const noexcept { return rows.cols; }
    std::size_t usable() const noexcept {
        std::size_t n = 0;
        for (bool b : oov) n += b ? 0 : 1;
        return n;
    }
    bool all_oov() const noexcept { return usable() == 0; }
    double coverage() const noexcept { return oov.empty() ? 0.0 : static_cast<double>(usable()) / oov.size(); }

    /// Only the non-OOV rows, in order.
    Matrix compact() const {
        Matrix m(usable(), rows.cols);
        std::size_t r = 0;
        for (std::size_t i = 0; i < rows.rows; ++i) {
            if (oov[i]) continue;
            auto src = rows.row(i);
            std::copy(src.begin(), src.end(), m.row(r++).begin());
        }
        return m;
    }
};

inline SentenceMatrix embed_sentence(const EmbeddingTable& table, const TokenizedSentence& sent) {
    if (sent.length() == 0) throw Error(ErrorKind::empty_sentence, "cannot embed an empty sentence");
    SentenceMatrix out;
    out.rows = Matrix(sent.length(), table.dim());
    out.oov.resize(sent.length());
    for (std::size_t n = 0; n < sent.length(); ++n) {
        if (auto v = table.lookup(sent.tokens[n])) {
            std::copy(v->begin(), v->end(), out.rows.row(n).begin());
        } else {
            out.oov[n] = true;
        }
    }
    return out;
}

/// Per-layer hidden states of one sentence, special tokens already removed.
struct LayeredTokenEmbeddings {
    std::size_t layers = 0;
    std::size_t tokens = 0;
    std::size_t dim = 0;
    std::vector<double> states;  // [layer][token][dim]

    LayeredTokenEmbeddings() = default;
    LayeredTokenEmbeddings(std::size_t t, std::size_t l, std::size_t d) : layers(t), tokens(l), dim(d), states(t * l * d) {}

    std::span<double> state(std::size_t layer, std::size_t token) {
        return {states.data() + (layer * tokens + token) * dim, dim};
    }
    std::span<const double> state(std::size_t layer, std::size_t token) const {
        return {states.data() + (layer * tokens + token) * dim, dim};
    }
};

/// What the per-token layer sum is divided by.
enum class LayerDivisor {
    layers,  // mean over layers
    tokens,  // sum over layers divided by the sentence length
};

inline SentenceMatrix average_layers(const LayeredTokenEmbeddings& layered, LayerDivisor divisor = LayerDivisor::layers) {
    if (layered.layers == 0 || layered.tokens == 0 || layered.dim == 0)
        throw Error(ErrorKind::empty_input, "layered embeddings need T, L, D >= 1");
    if (layered.states.size() != layered.layers * layered.tokens * layered.dim)
        throw Error(ErrorKind::shape, "layered embeddings storage does not match T x L x D");

    Matrix m(layered.tokens, layered.dim);
    for (std::size_t n = 0; n < layered.tokens; ++n) {
        auto out = m.row(n);
        for (std::size_t i = 0; i < layered.layers; ++i) {
            auto h = layered.state(i, n);
            for (std::size_t d = 0; d < layered.dim; ++d) out[d] += h[d];
        }
        const double denom = static_cast<double>(divisor == LayerDivisor::layers ? layered.layers : layered.tokens);
        for (double& x : out) x /= denom;
    }
    return SentenceMatrix::dense(std::move(m));
}

struct ContextualRecord {
    std::string id;
    std::vector<std::string> tokens;  // may be empty when the producer omitted it
    LayeredTokenEmbeddings layered;
};

/// Parses one JSON Lines record `{"id": str, "tokens": [str], "layers": [[[num]]]}`.
inline ContextualRecord parse_contextual_record(std::string_view line, std::size_t line_no = 0) {
    using nlohmann::json;
    auto fail = [&](const std::string& what) {
        return Error(ErrorKind::format, "contextual line " + std::to_string(line_no) + ": " + what, line_no);
    };
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) throw fail("missing string field 'id'");
    if (!j.contains("layers") || !j["layers"].is_array()) throw fail("missing array field 'layers'");

    ContextualRecord rec;
    rec.id = j["id"].get<std::string>();
    const json& layers = j["layers"];
    const std::size_t t = layers.size();
    if (t == 0 || !layers[0].is_array() || layers[0].empty() || !layers[0][0].is_array() || layers[0][0].empty())
        throw fail("layers must be a non-empty T x L x D array");
    const std::size_t l = layers[0].size();
    const std::size_t d = layers[0][0].size();
    rec.layered = LayeredTokenEmbeddings(t, l, d);
    for (std::size_t i = 0; i < t; ++i) {
        if (!layers[i].is_array() || layers[i].size() != l) throw fail("layer " + std::to_string(i) + " is not rectangular");
        for (std::size_t n = 0; n < l; ++n) {
            const json& vec = layers[i][n];
            if (!vec.is_array() || vec.size() != d) throw fail("state vector is not rectangular");
            auto out = rec.layered.state(i, n);
            for (std::size_t k = 0; k < d; ++k) {
                if (!vec[k].is_number()) throw fail("non-numeric state component");
                out[k] = vec[k].get<double>();
            }
        }
    }
    if (j.contains("tokens")) {
        if (!j["tokens"].is_array()) throw fail("'tokens' must be an array");
        for (const auto& tok : j["tokens"]) {
            if (!tok.is_string()) throw fail("'tokens' must hold strings");
            rec.tokens.push_back(nfc(tok.get<std::string>()));
        }
        if (rec.tokens.size() != l)
            throw fail("token list has " + std::to_string(rec.tokens.size()) + " entries but layers have " +
                       std::to_string(l) + " positions");
    }
    return rec;
}

inline std::vector<ContextualRecord> load_contextual_jsonl(std::istream& in) {
    std::vector<ContextualRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        out.push_back(parse_contextual_record(line, line_no));
    }
    return out;
}

inline void write_contextual_record(std::ostream& out, const ContextualRecord& rec) {
    nlohmann::json j;
    j["id"] = rec.id;
    j["tokens"] = rec.tokens;
    auto& layers = j["layers"] = nlohmann::json::array();
    for (std::size_t i = 0; i < rec.layered.layers; ++i) {
        auto layer = nlohmann::json::array();
        for (std::size_t n = 0; n < rec.layered.tokens; ++n) {
            auto s = rec.layered.state(i, n);
            layer.push_back(std::vector<double>(s.begin(), s.end()));
        }
        layers.push_back(std::move(layer));
    }
    out << j.dump() << '\n';
}

} // namespace hybridsim
