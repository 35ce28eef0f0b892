#include "pol/scorer.hpp"

#include <algorithm>
#include <cmath>

#include "pol/errors.hpp"
#include "pol/text.hpp"

namespace pol {

Span span_bounds(const LogicGraph& g, const std::string& node_id) {
    const LogicNode* node = g.find_node(node_id);
    if (!node) throw Error(ErrorCode::invalid_argument, "unknown node: " + node_id);

    std::vector<std::string> succs = g.successor_set(node_id);
    if (succs.size() != 1) {
        throw Error(ErrorCode::invalid_argument,
                    "span requires exactly one successor, node " + node_id + " has " +
                        std::to_string(succs.size()));
    }
    const LogicNode* succ = g.find_node(succs.front());
    return Span{node->sentence_index, succ->sentence_index};
}

namespace {

// Shared walk for both perplexity variants. Scores every segment of
// [span.p_st, span.p_ed] except `excluded_index`, conditioning each on the
// document prefix (question plus all earlier segments, minus the excluded
// unit) and, through the provider, on the earlier tokens of its own segment.
struct SpanWalk {
    double sum_neg_logprob = 0.0;
    std::size_t tokens_scored = 0;
};

SpanWalk walk_span(const CotDocument& doc, const LogicGraph& g, Span span, int excluded_index,
                   const LogProbProvider& provider, const ScorerOptions& opts) {
    if (span.p_st > span.p_ed) {
        throw Error(ErrorCode::invalid_argument, "span start after span end");
    }
    auto segments = g.ordered_segments();
    if (segments.empty() || span.p_ed > segments.back().sentence_index) {
        throw Error(ErrorCode::invalid_argument, "span exceeds segment range");
    }

    std::string prefix;
    if (opts.include_question_in_prefix) {
        prefix = normalize_ws(doc.question);
    }
    auto append_prefix = [&prefix](const std::string& text) {
        if (text.empty()) return;
        if (!prefix.empty()) prefix.push_back(' ');
        prefix += text;
    };

    SpanWalk walk;
    for (const auto& seg : segments) {
        if (seg.sentence_index > span.p_ed) break;
        std::string text = normalize_ws(*seg.text);
        if (seg.sentence_index == excluded_index) {
            continue;  // dropped from scoring and from all later prefixes
        }
        if (seg.sentence_index >= span.p_st) {
            std::vector<double> logprobs = provider.score_continuation(prefix, text);
            for (double lp : logprobs) walk.sum_neg_logprob -= lp;
            walk.tokens_scored += logprobs.size();
        }
        append_prefix(text);
    }
    return walk;
}

}  // namespace

double ppl_retain(const CotDocument& doc, const LogicGraph& g, Span span,
                  const LogProbProvider& provider, const ScorerOptions& opts) {
    SpanWalk walk = walk_span(doc, g, span, /*excluded_index=*/-1, provider, opts);
    if (walk.tokens_scored == 0) {
        throw Error(ErrorCode::degenerate_span, "no tokens to score in span");
    }
    return std::exp(walk.sum_neg_logprob / static_cast<double>(walk.tokens_scored));
}

double ppl_prune(const CotDocument& doc, const LogicGraph& g, Span span, int unit_sentence_index,
                 const LogProbProvider& provider, const ScorerOptions& opts) {
    if (unit_sentence_index < span.p_st || unit_sentence_index > span.p_ed) {
        throw Error(ErrorCode::invalid_argument, "pruned unit lies outside the span");
    }
    SpanWalk walk = walk_span(doc, g, span, unit_sentence_index, provider, opts);
    if (walk.tokens_scored == 0) {
        throw Error(ErrorCode::degenerate_span, "no tokens to score in pruned span");
    }
    double norm = static_cast<double>(walk.tokens_scored);
    if (opts.shared_length_normalization) {
        SpanWalk retain = walk_span(doc, g, span, -1, provider, opts);
        norm = static_cast<double>(retain.tokens_scored);
    }
    return std::exp(walk.sum_neg_logprob / norm);
}

std::vector<SpanScore> score_all(const CotDocument& doc, const LogicGraph& g,
                                 const std::vector<std::string>& scope_node_ids,
                                 Granularity granularity, const LogProbProvider& provider,
                                 const ScorerOptions& opts, std::vector<std::string>* diagnostics) {
    auto note = [diagnostics](std::string msg) {
        if (diagnostics) diagnostics->push_back(std::move(msg));
    };

    // (unit id, span, excluded index), assembled in sentence order.
    std::vector<std::tuple<std::string, Span, int>> units;
    if (granularity == Granularity::node) {
        for (const std::string& id : candidates(g, scope_node_ids)) {
            Span span = span_bounds(g, id);
            units.emplace_back(id, span, span.p_st);
        }
    } else {
        std::unordered_set<std::string> scope(scope_node_ids.begin(), scope_node_ids.end());
        for (const auto& conn : g.connections) {
            auto target = g.connection_target(conn.id);
            if (!target || !scope.count(*target)) continue;
            const LogicNode* target_node = g.find_node(*target);
            units.emplace_back(conn.id, Span{conn.sentence_index, target_node->sentence_index},
                               conn.sentence_index);
        }
    }

    std::vector<SpanScore> scores;
    scores.reserve(units.size());
    for (const auto& [unit_id, span, excluded] : units) {
        try {
            SpanWalk retain = walk_span(doc, g, span, -1, provider, opts);
            SpanWalk prune = walk_span(doc, g, span, excluded, provider, opts);
            if (retain.tokens_scored == 0 || prune.tokens_scored == 0) {
                throw Error(ErrorCode::degenerate_span, "no tokens to score in span");
            }
            double prune_norm = opts.shared_length_normalization
                                    ? static_cast<double>(retain.tokens_scored)
                                    : static_cast<double>(prune.tokens_scored);
            SpanScore s;
            s.unit_id = unit_id;
            s.span = span;
            s.ppl_retain =
                std::exp(retain.sum_neg_logprob / static_cast<double>(retain.tokens_scored));
            s.ppl_prune = std::exp(prune.sum_neg_logprob / prune_norm);
            s.score = utility_score(s.ppl_retain, s.ppl_prune);
            s.tokens_scored_retain = retain.tokens_scored;
            s.tokens_scored_prune = prune.tokens_scored;
            scores.push_back(std::move(s));
        } catch (const Error& e) {
            note("scoring failed for unit " + unit_id + ": " + e.what());
        }
    }
    return scores;
}

nlohmann::ordered_json span_scores_to_json(const std::string& doc_id,
                                           const std::vector<SpanScore>& scores) {
    nlohmann::ordered_json j;
    j["doc_id"] = doc_id;
    j["scores"] = nlohmann::ordered_json::array();
    for (const auto& s : scores) {
        j["scores"].push_back({{"unit_id", s.unit_id},
                               {"p_st", s.span.p_st},
                               {"p_ed", s.span.p_ed},
                               {"ppl_retain", s.ppl_retain},
                               {"ppl_prune", s.ppl_prune},
                               {"score", s.score},
                               {"tokens_scored_retain", s.tokens_scored_retain},
                               {"tokens_scored_prune", s.tokens_scored_prune}});
    }
    return j;
}

std::vector<SpanScore> span_scores_from_json(const nlohmann::json& j) {
    std::vector<SpanScore> out;
    for (const auto& js : j.at("scores")) {
        SpanScore s;
        s.unit_id = js.at("unit_id").get<std::string>();
        s.span.p_st = js.at("p_st").get<int>();
        s.span.p_ed = js.at("p_ed").get<int>();
        s.ppl_retain = js.at("ppl_retain").get<double>();
        s.ppl_prune = js.at("ppl_prune").get<double>();
        s.score = js.at("score").get<double>();
        s.tokens_scored_retain = js.at("tokens_scored_retain").get<std::size_t>();
        s.tokens_scored_prune = js.at("tokens_scored_prune").get<std::size_t>();
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace pol
