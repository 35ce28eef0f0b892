#include "pol/logic_graph.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "pol/errors.hpp"
#include "pol/text.hpp"

namespace pol {

const LogicNode* LogicGraph::find_node(const std::string& id) const {
    for (const auto& n : nodes) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

const RhetoricalConnection* LogicGraph::find_connection(const std::string& id) const {
    for (const auto& c : connections) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

std::vector<std::string> LogicGraph::support_set(const std::string& node_id) const {
    const LogicNode* node = find_node(node_id);
    if (!node) throw Error(ErrorCode::invalid_argument, "unknown node: " + node_id);

    std::vector<std::pair<int, std::string>> preds;
    for (const auto& e : edges) {
        if (e.to == node_id) {
            const LogicNode* from = find_node(e.from);
            preds.emplace_back(from ? from->sentence_index : 0, e.from);
        }
    }
    std::sort(preds.begin(), preds.end());
    std::vector<std::string> out;
    for (auto& [_, id] : preds) {
        if (out.empty() || out.back() != id) out.push_back(std::move(id));
    }
    return out;
}

std::vector<std::string> LogicGraph::successor_set(const std::string& node_id) const {
    const LogicNode* node = find_node(node_id);
    if (!node) throw Error(ErrorCode::invalid_argument, "unknown node: " + node_id);

    std::vector<std::pair<int, std::string>> succs;
    for (const auto& e : edges) {
        if (e.from == node_id) {
            const LogicNode* to = find_node(e.to);
            succs.emplace_back(to ? to->sentence_index : 0, e.to);
        }
    }
    std::sort(succs.begin(), succs.end());
    std::vector<std::string> out;
    for (auto& [_, id] : succs) {
        if (out.empty() || out.back() != id) out.push_back(std::move(id));
    }
    return out;
}

std::optional<std::string> LogicGraph::connection_target(const std::string& connection_id) const {
    const RhetoricalConnection* conn = find_connection(connection_id);
    if (!conn) throw Error(ErrorCode::invalid_argument, "unknown connection: " + connection_id);
    for (const auto& n : nodes) {
        if (n.sentence_index > conn->sentence_index) return n.id;
    }
    return std::nullopt;
}

std::vector<LogicGraph::SegmentRef> LogicGraph::ordered_segments() const {
    std::vector<SegmentRef> out;
    out.reserve(nodes.size() + connections.size());
    for (const auto& n : nodes) {
        out.push_back({SegmentKind::node, &n.id, n.sentence_index, &n.text});
    }
    for (const auto& c : connections) {
        out.push_back({SegmentKind::connection, &c.id, c.sentence_index, &c.text});
    }
    std::sort(out.begin(), out.end(),
              [](const SegmentRef& a, const SegmentRef& b) { return a.sentence_index < b.sentence_index; });
    return out;
}

BuildResult build_graph(const std::string& doc_id, const std::vector<SegmentTag>& tags,
                        const std::vector<Sentence>& sentences,
                        const std::vector<Phase>& node_phases,
                        const std::vector<EdgeClaim>& claims, const VerifyReport& report) {
    if (tags.size() != sentences.size()) {
        throw Error(ErrorCode::invalid_argument, "tags and sentences differ in length");
    }

    BuildResult result;
    LogicGraph& g = result.graph;
    g.doc_id = doc_id;

    std::unordered_map<std::string, int> node_index;  // label -> sentence_index
    std::size_t node_count = 0;
    std::size_t conn_count = 0;
    for (std::size_t i = 0; i < tags.size(); ++i) {
        const SegmentTag& tag = tags[i];
        if (tag.kind == SegmentKind::node) {
            if (node_count >= node_phases.size()) {
                throw Error(ErrorCode::invalid_argument, "missing phase label for node");
            }
            LogicNode node;
            node.id = "N" + std::to_string(node_count + 1);
            node.sentence_index = static_cast<int>(i);
            node.text = sentences[i].text;
            node.phase = node_phases[node_count];
            if (!node_index.emplace(node.id, node.sentence_index).second) {
                throw Error(ErrorCode::validation, "duplicate node label: " + node.id);
            }
            g.nodes.push_back(std::move(node));
            ++node_count;
        } else {
            RhetoricalConnection conn;
            conn.id = "C" + std::to_string(conn_count + 1);
            conn.sentence_index = static_cast<int>(i);
            conn.text = sentences[i].text;
            g.connections.push_back(std::move(conn));
            ++conn_count;
        }
    }

    // Forward-order sanitization: a claim whose target does not come after
    // its source is dropped. This enforces acyclicity by construction and
    // covers any cycle the verify report detected.
    for (const EdgeClaim& claim : claims) {
        auto from_it = node_index.find(claim.from_id);
        auto to_it = node_index.find(claim.to_id);
        if (from_it == node_index.end() || to_it == node_index.end()) {
            throw Error(ErrorCode::validation,
                        "edge claim references unknown node: " + claim.from_id + " -> " + claim.to_id);
        }
        if (from_it->second >= to_it->second) {
            result.warnings.push_back("dropped non-forward edge claim " + claim.from_id + " -> " +
                                      claim.to_id);
            continue;
        }
        bool duplicate = false;
        for (const auto& e : g.edges) {
            if (e.from == claim.from_id && e.to == claim.to_id) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        g.edges.push_back({claim.from_id, claim.to_id, claim.evidence});
    }

    for (const auto& cycle : report.cycles) {
        result.warnings.push_back("verify report cycle handled by forward-order rule: " +
                                  cycle.front() + " ... (" + std::to_string(cycle.size()) +
                                  " members)");
    }

    // Attach each connection to the edge (previous node, following node)
    // when that edge exists.
    for (auto& conn : g.connections) {
        const LogicNode* prev = nullptr;
        const LogicNode* next = nullptr;
        for (const auto& n : g.nodes) {
            if (n.sentence_index < conn.sentence_index) prev = &n;
            if (n.sentence_index > conn.sentence_index) {
                next = &n;
                break;
            }
        }
        if (!prev || !next) continue;
        for (const auto& e : g.edges) {
            if (e.from == prev->id && e.to == next->id) {
                conn.attached_edge = std::make_pair(prev->id, next->id);
                break;
            }
        }
    }

    // Per the verify pass: every non-initial node should have support.
    for (std::size_t i = 1; i < g.nodes.size(); ++i) {
        if (g.support_set(g.nodes[i].id).empty()) {
            result.warnings.push_back("node " + g.nodes[i].id + " has no incoming edge");
        }
    }
    return result;
}

std::vector<std::string> candidates(const LogicGraph& g,
                                    const std::vector<std::string>& scope_node_ids) {
    std::vector<std::pair<int, std::string>> hits;
    for (const std::string& id : scope_node_ids) {
        const LogicNode* node = g.find_node(id);
        if (!node) throw Error(ErrorCode::invalid_argument, "scope references unknown node: " + id);
        if (g.support_set(id).size() == 1 && g.successor_set(id).size() == 1) {
            hits.emplace_back(node->sentence_index, id);
        }
    }
    std::sort(hits.begin(), hits.end());
    std::vector<std::string> out;
    out.reserve(hits.size());
    for (auto& [_, id] : hits) out.push_back(std::move(id));
    return out;
}

std::string reconstruct_sequence(const LogicGraph& g,
                                 const std::unordered_set<std::string>& removed_nodes,
                                 const std::unordered_set<std::string>& removed_connections) {
    for (const auto& id : removed_nodes) {
        if (!g.find_node(id)) {
            throw Error(ErrorCode::invalid_argument, "removal set references unknown node: " + id);
        }
    }
    for (const auto& id : removed_connections) {
        if (!g.find_connection(id)) {
            throw Error(ErrorCode::invalid_argument,
                        "removal set references unknown connection: " + id);
        }
    }

    std::string out;
    for (const auto& seg : g.ordered_segments()) {
        bool removed = seg.kind == SegmentKind::node ? removed_nodes.count(*seg.id) > 0
                                                     : removed_connections.count(*seg.id) > 0;
        if (removed) continue;
        std::string text = normalize_ws(*seg.text);
        if (text.empty()) continue;
        if (!out.empty()) out.push_back(' ');
        out += text;
    }
    return out;
}

ValidationReport validate_dag(const LogicGraph& g) {
    ValidationReport report;

    std::unordered_map<std::string, int> index;
    bool labels_ok = true;
    for (const auto& n : g.nodes) {
        if (!index.emplace(n.id, n.sentence_index).second) {
            report.problems.push_back("duplicate node label " + n.id);
            labels_ok = false;
        }
    }

    // Forward-edge property.
    report.forward_edges = labels_ok;
    for (const auto& e : g.edges) {
        auto from = index.find(e.from);
        auto to = index.find(e.to);
        if (from == index.end() || to == index.end()) {
            report.problems.push_back("edge references unknown node " + e.from + " -> " + e.to);
            report.forward_edges = false;
            continue;
        }
        if (from->second >= to->second) {
            report.problems.push_back("backward edge " + e.from + " -> " + e.to);
            report.forward_edges = false;
        }
    }

    // Independent acyclicity check (Kahn's algorithm), not relying on the
    // forward-edge argument.
    {
        std::unordered_map<std::string, int> indegree;
        std::unordered_map<std::string, std::vector<std::string>> adj;
        for (const auto& n : g.nodes) indegree[n.id] = 0;
        bool edges_resolved = true;
        for (const auto& e : g.edges) {
            if (!indegree.count(e.from) || !indegree.count(e.to)) {
                edges_resolved = false;
                continue;
            }
            adj[e.from].push_back(e.to);
            ++indegree[e.to];
        }
        std::vector<std::string> queue;
        for (const auto& [id, deg] : indegree) {
            if (deg == 0) queue.push_back(id);
        }
        std::size_t visited = 0;
        while (!queue.empty()) {
            std::string id = queue.back();
            queue.pop_back();
            ++visited;
            for (const auto& next : adj[id]) {
                if (--indegree[next] == 0) queue.push_back(next);
            }
        }
        report.acyclic = edges_resolved && visited == g.nodes.size();
        if (!report.acyclic) report.problems.push_back("cycle detected");
    }

    // Partition completeness: node + connection sentence indices are unique
    // and cover 0..total-1.
    {
        std::vector<int> indices;
        for (const auto& n : g.nodes) indices.push_back(n.sentence_index);
        for (const auto& c : g.connections) indices.push_back(c.sentence_index);
        std::sort(indices.begin(), indices.end());
        report.partition_complete = true;
        for (std::size_t i = 0; i < indices.size(); ++i) {
            if (indices[i] != static_cast<int>(i)) {
                report.partition_complete = false;
                report.problems.push_back("sentence indices do not partition the segments");
                break;
            }
        }
    }

    // Connection attachments must reference existing edges.
    for (const auto& c : g.connections) {
        if (!c.attached_edge) continue;
        bool found = false;
        for (const auto& e : g.edges) {
            if (e.from == c.attached_edge->first && e.to == c.attached_edge->second) {
                found = true;
                break;
            }
        }
        if (!found) {
            report.problems.push_back("connection " + c.id + " attached to missing edge");
            report.partition_complete = report.partition_complete && false;
        }
    }
    return report;
}

nlohmann::ordered_json graph_to_json(const LogicGraph& g) {
    nlohmann::ordered_json j;
    j["doc_id"] = g.doc_id;
    j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : g.nodes) {
        j["nodes"].push_back({{"id", n.id},
                              {"sentence_index", n.sentence_index},
                              {"text", n.text},
                              {"phase", std::string(to_string(n.phase))}});
    }
    j["connections"] = nlohmann::ordered_json::array();
    for (const auto& c : g.connections) {
        nlohmann::ordered_json jc = {{"id", c.id},
                                     {"sentence_index", c.sentence_index},
                                     {"text", c.text}};
        if (c.attached_edge) {
            jc["attached_edge"] = {{"from", c.attached_edge->first}, {"to", c.attached_edge->second}};
        } else {
            jc["attached_edge"] = nullptr;
        }
        j["connections"].push_back(std::move(jc));
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : g.edges) {
        j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"evidence", e.evidence}});
    }
    return j;
}

LogicGraph graph_from_json(const nlohmann::json& j) {
    LogicGraph g;
    g.doc_id = j.at("doc_id").get<std::string>();
    for (const auto& jn : j.at("nodes")) {
        LogicNode n;
        n.id = jn.at("id").get<std::string>();
        n.sentence_index = jn.at("sentence_index").get<int>();
        n.text = jn.at("text").get<std::string>();
        n.phase = jn.at("phase").get<std::string>() == "verification" ? Phase::verification
                                                                      : Phase::reasoning;
        g.nodes.push_back(std::move(n));
    }
    for (const auto& jc : j.at("connections")) {
        RhetoricalConnection c;
        c.id = jc.at("id").get<std::string>();
        c.sentence_index = jc.at("sentence_index").get<int>();
        c.text = jc.at("text").get<std::string>();
        if (jc.contains("attached_edge") && !jc.at("attached_edge").is_null()) {
            c.attached_edge = std::make_pair(jc.at("attached_edge").at("from").get<std::string>(),
                                             jc.at("attached_edge").at("to").get<std::string>());
        }
        g.connections.push_back(std::move(c));
    }
    for (const auto& je : j.at("edges")) {
        g.edges.push_back({je.at("from").get<std::string>(), je.at("to").get<std::string>(),
                           je.value("evidence", std::string())});
    }
    return g;
}

}  // namespace pol
