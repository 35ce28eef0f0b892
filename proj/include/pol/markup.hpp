#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pol {

enum class SegmentKind { node, connection };
enum class Phase { reasoning, verification };

std::string_view to_string(SegmentKind kind);
std::string_view to_string(Phase phase);

/// One tagged segment as emitted by the segmentation pass. `phase` is only
/// present when the reply carried the optional phase attribute on a node tag.
struct SegmentTag {
    SegmentKind kind = SegmentKind::node;
    std::string text;
    int emit_index = 0;
    std::optional<Phase> phase;

    bool operator==(const SegmentTag&) const = default;
};

/// A directed support claim between two node labels, with the quoted
/// rationale the model gave for it.
struct EdgeClaim {
    std::string from_id;
    std::string to_id;
    std::string evidence;

    bool operator==(const EdgeClaim&) const = default;
};

enum class NodeStatus { ok, missing_link, flagged };

struct VerifyReport {
    std::vector<std::pair<std::string, NodeStatus>> node_status;
    std::vector<std::vector<std::string>> cycles;

    bool operator==(const VerifyReport&) const = default;
};

/// Parses a reply of the segmentation pass under a strict grammar:
/// a sequence of `<node begin>...</node end>` and
/// `<connection begin>...</connection end>` blocks (node open tags may carry
/// one `phase=reasoning|verification` attribute), separated by whitespace
/// only. Anything else raises MarkupError with the byte offset and the
/// token the grammar expected.
std::vector<SegmentTag> parse_segment_markup(std::string_view raw);

/// Parses a reply of the connection pass: `<edge from=A to=B>...</edge>`
/// blocks followed by a mandatory `<verify>...</verify>` block. Evidence is
/// the block body with an optional leading `Supported by:` and surrounding
/// quotes stripped.
std::pair<std::vector<EdgeClaim>, VerifyReport> parse_edge_markup(std::string_view raw);

/// Inverse printers; parse(render(x)) == x for well-formed input.
std::string render_segment_markup(const std::vector<SegmentTag>& tags);
std::string render_edge_markup(const std::vector<EdgeClaim>& claims, const VerifyReport& report);

}  // namespace pol
