#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pol/cot_document.hpp"
#include "pol/logic_graph.hpp"
#include "pol/providers.hpp"
#include "pol/strategy.hpp"

namespace pol {

/// Inclusive sentence-index range from a unit through its following node.
struct Span {
    int p_st = 0;
    int p_ed = 0;

    bool operator==(const Span&) const = default;
};

struct SpanScore {
    std::string unit_id;
    Span span;
    double ppl_retain = 0.0;
    double ppl_prune = 0.0;
    double score = 0.0;  // ppl_prune - ppl_retain; low means dispensable
    std::size_t tokens_scored_retain = 0;
    std::size_t tokens_scored_prune = 0;
};

struct ScorerOptions {
    /// Normalize the pruned variant by the tokens it actually scores
    /// (default). When set, the retained variant's token count is reused
    /// instead, for fidelity experiments.
    bool shared_length_normalization = false;
    /// Condition on the question before the first segment.
    bool include_question_in_prefix = true;
};

/// Span of a pruning candidate: from the node to its unique successor.
/// The candidate must have exactly one successor.
Span span_bounds(const LogicGraph& g, const std::string& node_id);

/// Perplexity over the span with every segment in place: exp of the mean
/// negative log-probability across all span tokens, each conditioned on the
/// full document prefix and the preceding tokens of its own segment.
double ppl_retain(const CotDocument& doc, const LogicGraph& g, Span span,
                  const LogProbProvider& provider, const ScorerOptions& opts = {});

/// Same computation with the unit at `unit_sentence_index` dropped from
/// both the scored stream and every conditioning prefix.
double ppl_prune(const CotDocument& doc, const LogicGraph& g, Span span, int unit_sentence_index,
                 const LogProbProvider& provider, const ScorerOptions& opts = {});

inline double utility_score(double retain, double prune) { return prune - retain; }

/// Scores every eligible unit of the scope against the original sequence.
/// Node granularity scores the linear candidates of the scope; connection
/// granularity scores each connection introducing a scope node, over the
/// span from the connection through that node. Units that fail to score
/// are skipped and reported through `diagnostics`.
std::vector<SpanScore> score_all(const CotDocument& doc, const LogicGraph& g,
                                 const std::vector<std::string>& scope_node_ids,
                                 Granularity granularity, const LogProbProvider& provider,
                                 const ScorerOptions& opts = {},
                                 std::vector<std::string>* diagnostics = nullptr);

nlohmann::ordered_json span_scores_to_json(const std::string& doc_id,
                                           const std::vector<SpanScore>& scores);
std::vector<SpanScore> span_scores_from_json(const nlohmann::json& j);

}  // namespace pol
