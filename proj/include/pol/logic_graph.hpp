#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pol/cot_document.hpp"
#include "pol/markup.hpp"

namespace pol {

struct LogicNode {
    std::string id;
    int sentence_index = 0;
    std::string text;  // source-aligned
    Phase phase = Phase::reasoning;
};

struct RhetoricalConnection {
    std::string id;
    int sentence_index = 0;
    std::string text;
    /// The edge this connection justifies, when it exists in the edge set:
    /// (nearest preceding node, nearest following node).
    std::optional<std::pair<std::string, std::string>> attached_edge;
};

struct LogicEdge {
    std::string from;
    std::string to;
    std::string evidence;
};

/// The reconstructed deductive DAG of one document. Nodes and connections
/// are kept in sentence order; their sentence_index sets partition the
/// emitted segments, and every edge points forward in that order.
class LogicGraph {
public:
    std::string doc_id;
    std::vector<LogicNode> nodes;                  // ordered by sentence_index
    std::vector<RhetoricalConnection> connections;  // ordered by sentence_index
    std::vector<LogicEdge> edges;

    const LogicNode* find_node(const std::string& id) const;
    const RhetoricalConnection* find_connection(const std::string& id) const;

    /// Direct predecessors of a node, ordered by sentence_index.
    std::vector<std::string> support_set(const std::string& node_id) const;
    /// Direct successors of a node, ordered by sentence_index.
    std::vector<std::string> successor_set(const std::string& node_id) const;

    /// Nearest node following the connection in sentence order; the node
    /// this connection introduces.
    std::optional<std::string> connection_target(const std::string& connection_id) const;

    /// All segments (nodes and connections) merged in sentence order.
    struct SegmentRef {
        SegmentKind kind;
        const std::string* id;
        int sentence_index;
        const std::string* text;
    };
    std::vector<SegmentRef> ordered_segments() const;

    int total_segments() const { return static_cast<int>(nodes.size() + connections.size()); }
};

struct BuildResult {
    LogicGraph graph;
    std::vector<std::string> warnings;
};

/// Assembles the graph from aligned segments, per-node phase labels, and
/// validated edge claims. Claims whose target does not come after their
/// source in sentence order are dropped with a warning, which also repairs
/// any cycle the verify report detected. Non-initial nodes left without
/// support are noted in the warnings.
BuildResult build_graph(const std::string& doc_id, const std::vector<SegmentTag>& tags,
                        const std::vector<Sentence>& sentences,
                        const std::vector<Phase>& node_phases,
                        const std::vector<EdgeClaim>& claims, const VerifyReport& report);

/// Scope nodes with exactly one predecessor and exactly one successor,
/// ordered by sentence_index.
std::vector<std::string> candidates(const LogicGraph& g,
                                    const std::vector<std::string>& scope_node_ids);

/// Joins the surviving segment texts in sentence order with single spaces,
/// whitespace-normalizing each. With empty removal sets this equals the
/// whitespace-normalized source trace.
std::string reconstruct_sequence(const LogicGraph& g,
                                 const std::unordered_set<std::string>& removed_nodes,
                                 const std::unordered_set<std::string>& removed_connections);

struct ValidationReport {
    bool acyclic = false;
    bool partition_complete = false;
    bool forward_edges = false;
    std::vector<std::string> problems;

    bool ok() const { return acyclic && partition_complete && forward_edges; }
};

/// Independent structural checks; all three must pass before scoring.
ValidationReport validate_dag(const LogicGraph& g);

nlohmann::ordered_json graph_to_json(const LogicGraph& g);
LogicGraph graph_from_json(const nlohmann::json& j);

}  // namespace pol
