#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hybridsim {

enum class ErrorKind {
    parse,                  // malformed input line
    range,                  // value outside its permitted interval
    config,                 // invalid configuration (bounds, flags)
    empty_sentence,         // nothing left after trimming
    format,                 // embedding / checkpoint file structure
    shape,                  // dimension mismatch
    empty_input,            // zero layers / zero tokens
    degenerate_vector,      // zero-norm vector in cosine
    all_oov,                // no usable embedding rows
    too_short,              // sentence shorter than a kernel
    undefined_correlation,  // constant series
    data,                   // no usable training data
    divergence,             // non-finite training loss
    numeric,                // non-finite gradient or similar
    join,                   // ids do not line up between files
    io,                     // file could not be opened / written
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::range: return "range";
    case ErrorKind::config: return "config";
    case ErrorKind::empty_sentence: return "empty-sentence";
    case ErrorKind::format: return "format";
    case ErrorKind::shape: return "shape";
    case ErrorKind::empty_input: return "empty-input";
    case ErrorKind::degenerate_vector: return "degenerate-vector";
    case ErrorKind::all_oov: return "all-oov";
    case ErrorKind::too_short: return "too-short";
    case ErrorKind::undefined_correlation: return "undefined-correlation";
    case ErrorKind::data: return "data";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::join: return "join";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

/// Exception carrying a machine-readable category.
///
/// `line()` is 1-based and only meaningful for parse/format errors read from
/// text files; it is 0 otherwise.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::size_t line = 0)
        : std::runtime_error(message), kind_(kind), line_(line) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    ErrorKind kind_;
    std::size_t line_;
};

} // namespace hybridsim
