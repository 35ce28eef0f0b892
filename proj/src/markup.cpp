#include "pol/markup.hpp"

#include <algorithm>

#include "pol/errors.hpp"
#include "pol/text.hpp"

namespace pol {

std::string_view to_string(SegmentKind kind) {
    return kind == SegmentKind::node ? "node" : "connection";
}

std::string_view to_string(Phase phase) {
    return phase == Phase::reasoning ? "reasoning" : "verification";
}

namespace {

// Cursor over the raw reply. All errors report the current byte offset.
struct Scanner {
    std::string_view raw;
    std::size_t pos = 0;

    bool eof() const { return pos >= raw.size(); }
    char peek() const { return raw[pos]; }

    void skip_ws() {
        while (!eof() && is_ws(raw[pos])) ++pos;
    }

    bool try_consume(std::string_view literal) {
        if (raw.substr(pos, literal.size()) == literal) {
            pos += literal.size();
            return true;
        }
        return false;
    }

    bool lookahead(std::string_view literal) const {
        return raw.substr(pos, literal.size()) == literal;
    }

    [[noreturn]] void fail(std::string expected, std::string detail = "") const {
        throw MarkupError(pos, std::move(expected), std::move(detail));
    }
};

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_ws(s[b])) ++b;
    while (e > b && is_ws(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

// Reads block text up to the matching close tag; any '<' inside the body
// must start that close tag, otherwise the grammar is violated.
std::string read_block_text(Scanner& sc, std::string_view close_tag) {
    std::size_t body_start = sc.pos;
    while (true) {
        std::size_t lt = sc.raw.find('<', sc.pos);
        if (lt == std::string_view::npos) {
            sc.pos = sc.raw.size();
            sc.fail(std::string(close_tag), "end of input inside block");
        }
        sc.pos = lt;
        if (sc.lookahead(close_tag)) {
            std::string text = trim(sc.raw.substr(body_start, lt - body_start));
            sc.pos += close_tag.size();
            return text;
        }
        if (sc.lookahead("<node") || sc.lookahead("<connection") || sc.lookahead("<edge") ||
            sc.lookahead("<verify")) {
            sc.fail(std::string(close_tag), "unexpected open tag");
        }
        sc.fail(std::string(close_tag), "unknown tag");
    }
}

std::string read_label(Scanner& sc) {
    std::size_t start = sc.pos;
    while (!sc.eof()) {
        char c = sc.peek();
        bool label_char = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                          (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (!label_char) break;
        ++sc.pos;
    }
    if (sc.pos == start) sc.fail("node label");
    return std::string(sc.raw.substr(start, sc.pos - start));
}

}  // namespace

std::vector<SegmentTag> parse_segment_markup(std::string_view raw) {
    Scanner sc{raw};
    std::vector<SegmentTag> tags;

    sc.skip_ws();
    while (!sc.eof()) {
        if (sc.peek() != '<') {
            sc.fail("open tag", "text outside block");
        }
        SegmentTag tag;
        tag.emit_index = static_cast<int>(tags.size());
        if (sc.try_consume("<node begin")) {
            tag.kind = SegmentKind::node;
            sc.skip_ws();
            if (sc.try_consume("phase=")) {
                if (sc.try_consume("reasoning")) {
                    tag.phase = Phase::reasoning;
                } else if (sc.try_consume("verification")) {
                    tag.phase = Phase::verification;
                } else {
                    sc.fail("phase value reasoning|verification");
                }
                sc.skip_ws();
            }
            if (!sc.try_consume(">")) sc.fail(">");
            tag.text = read_block_text(sc, "</node end>");
        } else if (sc.try_consume("<connection begin>")) {
            tag.kind = SegmentKind::connection;
            tag.text = read_block_text(sc, "</connection end>");
        } else {
            sc.fail("<node begin> or <connection begin>", "unknown tag");
        }
        if (tag.text.empty()) {
            sc.fail("nonempty segment text", "empty block");
        }
        tags.push_back(std::move(tag));
        sc.skip_ws();
    }
    return tags;
}

std::pair<std::vector<EdgeClaim>, VerifyReport> parse_edge_markup(std::string_view raw) {
    Scanner sc{raw};
    std::vector<EdgeClaim> claims;

    sc.skip_ws();
    while (!sc.eof() && sc.lookahead("<edge")) {
        sc.pos += 5;
        sc.skip_ws();
        if (!sc.try_consume("from=")) sc.fail("from=");
        EdgeClaim claim;
        claim.from_id = read_label(sc);
        sc.skip_ws();
        if (!sc.try_consume("to=")) sc.fail("to=");
        claim.to_id = read_label(sc);
        sc.skip_ws();
        if (!sc.try_consume(">")) sc.fail(">");
        if (claim.from_id == claim.to_id) {
            sc.fail("distinct node labels", "self edge " + claim.from_id);
        }

        std::string body = read_block_text(sc, "</edge>");
        // "Supported by:" prefix and one pair of surrounding quotes are
        // presentation, not evidence.
        constexpr std::string_view kPrefix = "Supported by:";
        if (body.size() >= kPrefix.size() &&
            contains_icase(std::string_view(body).substr(0, kPrefix.size()), kPrefix)) {
            body = trim(std::string_view(body).substr(kPrefix.size()));
        }
        if (body.size() >= 2 && body.front() == '"' && body.back() == '"') {
            body = body.substr(1, body.size() - 2);
        }
        claim.evidence = body;
        claims.push_back(std::move(claim));
        sc.skip_ws();
    }

    if (sc.eof() || !sc.try_consume("<verify>")) {
        sc.fail("<verify>", "verify block required");
    }
    std::size_t body_start = sc.pos;
    std::size_t close = raw.find("</verify>", sc.pos);
    if (close == std::string_view::npos) {
        sc.pos = raw.size();
        sc.fail("</verify>", "end of input inside block");
    }
    std::string_view body = raw.substr(body_start, close - body_start);
    sc.pos = close + std::string_view("</verify>").size();
    sc.skip_ws();
    if (!sc.eof()) {
        sc.fail("end of input", "trailing content after verify block");
    }

    VerifyReport report;
    std::size_t line_start = 0;
    while (line_start <= body.size()) {
        std::size_t eol = body.find('\n', line_start);
        std::string line = trim(body.substr(
            line_start, eol == std::string_view::npos ? std::string_view::npos : eol - line_start));
        line_start = eol == std::string_view::npos ? body.size() + 1 : eol + 1;
        if (line.empty()) continue;

        if (line.rfind("Node ", 0) == 0) {
            std::size_t colon = line.find(':');
            if (colon == std::string::npos) continue;
            std::string label = trim(std::string_view(line).substr(5, colon - 5));
            std::string status_text = trim(std::string_view(line).substr(colon + 1));
            NodeStatus status = NodeStatus::flagged;
            if (contains_icase(status_text, "ok")) {
                status = NodeStatus::ok;
            } else if (contains_icase(status_text, "missing")) {
                status = NodeStatus::missing_link;
            }
            report.node_status.emplace_back(std::move(label), status);
        } else if (line.rfind("Cycle detected:", 0) == 0) {
            std::string rest = trim(std::string_view(line).substr(15));
            std::vector<std::string> members;
            std::size_t p = 0;
            while (p < rest.size()) {
                std::size_t arrow_utf8 = rest.find("→", p);
                std::size_t arrow_ascii = rest.find("->", p);
                std::size_t arrow = std::min(arrow_utf8, arrow_ascii);
                std::string member = trim(std::string_view(rest).substr(
                    p, arrow == std::string::npos ? std::string::npos : arrow - p));
                if (!member.empty()) members.push_back(std::move(member));
                if (arrow == std::string::npos) break;
                p = arrow + (arrow == arrow_ascii ? 2 : std::string_view("→").size());
            }
            if (members.size() >= 2) report.cycles.push_back(std::move(members));
        }
        // Free-form commentary lines are tolerated inside the verify block.
    }
    return {std::move(claims), std::move(report)};
}

std::string render_segment_markup(const std::vector<SegmentTag>& tags) {
    std::string out;
    for (const SegmentTag& tag : tags) {
        if (tag.kind == SegmentKind::node) {
            out += "<node begin";
            if (tag.phase) {
                out += " phase=";
                out += to_string(*tag.phase);
            }
            out += ">";
            out += tag.text;
            out += "</node end>\n";
        } else {
            out += "<connection begin>";
            out += tag.text;
            out += "</connection end>\n";
        }
    }
    return out;
}

std::string render_edge_markup(const std::vector<EdgeClaim>& claims, const VerifyReport& report) {
    std::string out;
    for (const EdgeClaim& claim : claims) {
        out += "<edge from=" + claim.from_id + " to=" + claim.to_id + ">Supported by: \"" +
               claim.evidence + "\"</edge>\n";
    }
    out += "<verify>\n";
    for (const auto& [label, status] : report.node_status) {
        out += "Node " + label + ": ";
        switch (status) {
            case NodeStatus::ok: out += "OK"; break;
            case NodeStatus::missing_link: out += "Missing link justification"; break;
            case NodeStatus::flagged: out += "Flagged"; break;
        }
        out += "\n";
    }
    for (const auto& cycle : report.cycles) {
        out += "Cycle detected: ";
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            if (i) out += " -> ";
            out += cycle[i];
        }
        out += "\n";
    }
    out += "</verify>";
    return out;
}

}  // namespace pol
