#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pol {

/// One record of the input dataset: a question, its long reasoning trace,
/// and the final answer.
struct CotDocument {
    std::string id;
    std::string question;
    std::string cot;
    std::string answer;
};

/// Half-open byte range [start, end) into CotDocument::cot.
struct CharSpan {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - start; }
    bool operator==(const CharSpan&) const = default;
};

/// An ordered sentence unit of the trace. `text` is the exact source
/// substring covered by `span`; spans of successive sentences are disjoint
/// and strictly increasing.
struct Sentence {
    int index = 0;
    CharSpan span;
    std::string text;
};

/// Reads a JSONL dataset (one object per line with keys id/question/cot/answer).
/// Input order is preserved. Malformed lines and duplicate ids are reported
/// with their line number / offending id.
std::vector<CotDocument> load_documents(const std::filesystem::path& path);

/// Parses documents from an already-loaded JSONL payload. `origin` is used
/// in error messages.
std::vector<CotDocument> parse_documents(std::string_view jsonl, std::string_view origin);

/// Finds the earliest whitespace-tolerant occurrence of `segment` in `cot`
/// at or after `search_from` and returns its source byte span. Matching
/// collapses whitespace runs on both sides to a single space; the returned
/// span always references original bytes. Throws AlignmentError when the
/// segment does not occur in the remaining text.
CharSpan align_segment(std::string_view cot, std::string_view segment, std::size_t search_from);

}  // namespace pol
