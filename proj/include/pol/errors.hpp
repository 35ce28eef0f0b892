#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pol {

enum class ErrorCode {
    invalid_argument,
    io,
    schema,
    alignment,
    markup,
    validation,
    transport,
    pass_through,
    degenerate_span,
    domain,
    internal,
};

/// Base error for the whole toolkit. Carries a coarse code so the C API
/// can map failures onto stable status values.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Strict-grammar failure. Offset is a byte position into the raw reply;
/// `expected` names the token the grammar wanted at that position.
class MarkupError : public Error {
public:
    MarkupError(std::size_t offset, std::string expected, std::string detail)
        : Error(ErrorCode::markup,
                "markup error at byte " + std::to_string(offset) + ": expected " + expected +
                    (detail.empty() ? "" : " (" + detail + ")")),
          offset_(offset),
          expected_(std::move(expected)),
          detail_(std::move(detail)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t offset_;
    std::string expected_;
    std::string detail_;
};

/// A segment echoed by the model could not be located in the source text.
class AlignmentError : public Error {
public:
    explicit AlignmentError(std::string segment)
        : Error(ErrorCode::alignment, "segment not found in source: \"" + segment + "\""),
          segment_(std::move(segment)) {}

    const std::string& segment() const noexcept { return segment_; }

private:
    std::string segment_;
};

/// Raised when all repair retries are exhausted; the document is emitted
/// unpruned with a diagnostic flag instead of aborting the batch.
class PassThroughError : public Error {
public:
    explicit PassThroughError(std::string reason)
        : Error(ErrorCode::pass_through, std::move(reason)) {}
};

}  // namespace pol
