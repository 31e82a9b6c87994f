#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "hybridsim/error.hpp"

namespace hybridsim {

struct SentencePair {
    std::string id;
    std::string left;
    std::string right;
    double gold_raw = 0.0;
    std::optional<double> gold;  // set by normalize_scores

    friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

struct TokenizedSentence {
    std::vector<std::string> tokens;

    std::size_t length() const noexcept { return tokens.size(); }
};

enum class TokenizeMode { whitespace, pretokenized };

struct ScoreRange {
    double lo = 0.0;
    double hi = 5.0;
};

namespace detail {

inline bool is_ascii_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

inline std::string_view trim(std::string_view s) noexcept {
    while (!s.empty() && is_ascii_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_ascii_space(s.back())) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

/// Shortest decimal form is not needed here; 17 significant digits always
/// round-trips a double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

/// Unicode NFC form of a UTF-8 string. ASCII input is returned unchanged.
inline std::string nfc(std::string_view utf8) {
    bool ascii = true;
    for (unsigned char c : utf8) {
        if (c >= 0x80) {
            ascii = false;
            break;
        }
    }
    if (ascii) return std::string(utf8);

    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw Error(ErrorKind::config, "ICU NFC normalizer unavailable");
    const auto source = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    const icu::UnicodeString normalized = normalizer->normalize(source, status);
    if (U_FAILURE(status)) throw Error(ErrorKind::parse, "invalid UTF-8 in token");
    std::string out;
    normalized.toUTF8String(out);
    return out;
}

/// Splits a sentence into tokens. Whitespace mode splits on runs of ASCII
/// whitespace; pretokenized mode splits on single spaces and rejects empty
/// tokens. Tokens are NFC-normalized in both modes.
inline TokenizedSentence tokenize(std::string_view text, TokenizeMode mode = TokenizeMode::whitespace) {
    const std::string_view body = detail::trim(text);
    if (body.empty()) throw Error(ErrorKind::empty_sentence, "sentence is empty after trimming");

    TokenizedSentence out;
    if (mode == TokenizeMode::whitespace) {
        std::size_t i = 0;
        while (i < body.size()) {
            while (i < body.size() && detail::is_ascii_space(body[i])) ++i;
            const std::size_t start = i;
            while (i < body.size() && !detail::is_ascii_space(body[i])) ++i;
            if (i > start) out.tokens.push_back(nfc(body.substr(start, i - start)));
        }
    } else {
        for (auto piece : detail::split(body, ' ')) {
            if (piece.empty()) throw Error(ErrorKind::parse, "empty token in pretokenized sentence");
            out.tokens.push_back(nfc(piece));
        }
    }
    return out;
}

/// Reads STS-style `left<TAB>right<TAB>score[<TAB>...]` lines. Blank lines and
/// `#` comments are skipped; the 1-based line number becomes the pair id.
inline std::vector<SentencePair> parse_sts_tsv(std::istream& in, ScoreRange range = {}) {
    std::vector<SentencePair> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
        if (detail::trim(view).empty() || view.front() == '#') continue;

        const auto fields = detail::split(view, '\t');
        if (fields.size() < 3)
            throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected 3 tab-separated fields",
                        line_no);
        const auto score = detail::parse_double(fields[2]);
        if (!score)
            throw Error(ErrorKind::parse,
                        "line " + std::to_string(line_no) + ": score '" + std::string(fields[2]) + "' is not a number",
                        line_no);
        if (!(*score >= range.lo && *score <= range.hi))
            throw Error(ErrorKind::range,
                        "line " + std::to_string(line_no) + ": score " + detail::format_double(*score) +
                            " outside [" + detail::format_double(range.lo) + ", " + detail::format_double(range.hi) + "]",
                        line_no);
        if (detail::trim(fields[0]).empty() || detail::trim(fields[1]).empty())
            throw Error(ErrorKind::empty_sentence, "line " + std::to_string(line_no) + ": empty sentence", line_no);

        SentencePair p;
        p.id = std::to_string(line_no);
        p.left = std::string(fields[0]);
        p.right = std::string(fields[1]);
        p.gold_raw = *score;
        pairs.push_back(std::move(p));
    }
    return pairs;
}

/// Writes pairs in the format parse_sts_tsv reads. Ids are not written; they
/// are regenerated from line numbers on reading.
inline void write_sts_tsv(std::ostream& out, const std::vector<SentencePair>& pairs) {
    for (const auto& p : pairs) out << p.left << '\t' << p.right << '\t' << detail::format_double(p.gold_raw) << '\n';
}

/// Min-max scales gold_raw from [lo, hi] into gold in [0, 1].
inline std::vector<SentencePair> normalize_scores(std::vector<SentencePair> pairs, double lo = 0.0, double hi = 5.0) {
    if (!(hi > lo)) throw Error(ErrorKind::config, "normalization bounds require hi > lo");
    const double span = hi - lo;
    for (auto& p : pairs) {
        if (!(p.gold_raw >= lo && p.gold_raw <= hi))
            throw Error(ErrorKind::range, "pair " + p.id + ": gold score " + detail::format_double(p.gold_raw) +
                                              " outside normalization bounds");
        p.gold = (p.gold_raw - lo) / span;
    }
    return pairs;
}

inline double denormalize_score(double gold, double lo = 0.0, double hi = 5.0) { return lo + gold * (hi - lo); }

} // namespace hybridsim
