#include "pol/cot_document.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "pol/errors.hpp"
#include "pol/text.hpp"

namespace pol {

namespace {

std::string require_string_field(const nlohmann::json& obj, const char* key, std::size_t line_no) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw Error(ErrorCode::schema,
                    "line " + std::to_string(line_no) + ": missing field " + key);
    }
    if (!it->is_string()) {
        throw Error(ErrorCode::schema,
                    "line " + std::to_string(line_no) + ": field " + key + " must be a string");
    }
    return it->get<std::string>();
}

}  // namespace

std::vector<CotDocument> parse_documents(std::string_view jsonl, std::string_view origin) {
    std::vector<CotDocument> docs;
    std::unordered_set<std::string> seen_ids;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= jsonl.size()) {
        std::size_t eol = jsonl.find('\n', pos);
        std::string_view line = jsonl.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                                : eol - pos);
        pos = eol == std::string_view::npos ? jsonl.size() + 1 : eol + 1;
        ++line_no;
        if (normalize_ws(line).empty()) continue;

        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            throw Error(ErrorCode::schema,
                        "line " + std::to_string(line_no) + ": malformed JSON object in " +
                            std::string(origin));
        }

        CotDocument doc;
        doc.id = require_string_field(obj, "id", line_no);
        doc.question = require_string_field(obj, "question", line_no);
        doc.cot = require_string_field(obj, "cot", line_no);
        doc.answer = require_string_field(obj, "answer", line_no);

        if (doc.id.empty()) {
            throw Error(ErrorCode::schema, "line " + std::to_string(line_no) + ": empty id");
        }
        if (!seen_ids.insert(doc.id).second) {
            throw Error(ErrorCode::schema,
                        "line " + std::to_string(line_no) + ": duplicate id " + doc.id);
        }
        if (normalize_ws(doc.cot).empty()) {
            throw Error(ErrorCode::schema,
                        "line " + std::to_string(line_no) + ": empty cot for id " + doc.id);
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::vector<CotDocument> load_documents(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::io, "cannot open input file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_documents(buf.str(), path.string());
}

CharSpan align_segment(std::string_view cot, std::string_view segment, std::size_t search_from) {
    if (search_from > cot.size()) {
        throw Error(ErrorCode::invalid_argument, "search_from beyond end of text");
    }

    // Normalized needle: interior whitespace runs become single spaces,
    // leading/trailing whitespace is dropped.
    std::string needle = normalize_ws(segment);
    if (needle.empty()) {
        throw AlignmentError(std::string(segment));
    }

    for (std::size_t start = search_from; start < cot.size(); ++start) {
        if (is_ws(cot[start]) || cot[start] != needle[0]) continue;

        std::size_t i = start;
        std::size_t j = 0;
        std::size_t last_match_end = 0;
        bool ok = true;
        while (j < needle.size()) {
            if (needle[j] == ' ') {
                // One normalized space must absorb a nonempty whitespace run.
                if (i >= cot.size() || !is_ws(cot[i])) {
                    ok = false;
                    break;
                }
                while (i < cot.size() && is_ws(cot[i])) ++i;
                ++j;
                continue;
            }
            if (i >= cot.size() || cot[i] != needle[j]) {
                ok = false;
                break;
            }
            ++i;
            ++j;
            last_match_end = i;
        }
        if (ok) {
            return CharSpan{start, last_match_end};
        }
    }
    throw AlignmentError(std::string(segment));
}

}  // namespace pol
