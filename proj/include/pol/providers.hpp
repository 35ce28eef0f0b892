#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace pol {

/// Contract for the frozen scoring model. Implementations must be
/// deterministic for fixed inputs and return natural-log probabilities <= 0.
class LogProbProvider {
public:
    virtual ~LogProbProvider() = default;

    /// Per-token ln probabilities of `continuation`'s tokens given `prefix`.
    virtual std::vector<double> score_continuation(std::string_view prefix,
                                                   std::string_view continuation) const = 0;

    /// Token count of `text` under this provider's own tokenization.
    virtual std::size_t count_tokens(std::string_view text) const = 0;

    virtual std::string name() const = 0;
};

inline std::size_t count_tokens(std::string_view text, const LogProbProvider& provider) {
    return provider.count_tokens(text);
}

std::vector<std::string> whitespace_tokens(std::string_view text);

/// Deterministic stand-in for a subword tokenizer: letter runs cost
/// ceil(len/4) tokens, digit runs ceil(len/3), every other non-space
/// character one token. Absolute counts are tokenizer-specific; this
/// approximation tracks common BPE vocabularies on English math prose.
std::size_t approx_subword_token_count(std::string_view text);

/// Context-free provider: every token has probability 1/V. Whitespace
/// tokenization.
class UniformLogProbProvider final : public LogProbProvider {
public:
    explicit UniformLogProbProvider(std::size_t vocab_size);

    std::vector<double> score_continuation(std::string_view prefix,
                                           std::string_view continuation) const override;
    std::size_t count_tokens(std::string_view text) const override;
    std::string name() const override;

    std::size_t vocab_size() const noexcept { return vocab_size_; }

private:
    std::size_t vocab_size_;
};

/// First-order model over whitespace tokens driven by an explicit table of
/// (prev, next) -> probability rows. The sentinel previous token for the
/// start of text is "<s>". Pairs absent from the table fall back to a
/// uniform probability over the known vocabulary.
class BigramLogProbProvider final : public LogProbProvider {
public:
    /// Rows are TSV lines `prev<TAB>next<TAB>prob`. Blank lines and lines
    /// starting with '#' are skipped.
    static BigramLogProbProvider from_tsv(const std::filesystem::path& path);
    static BigramLogProbProvider from_tsv_text(std::string_view tsv, std::string_view origin);

    explicit BigramLogProbProvider(std::map<std::pair<std::string, std::string>, double> table);

    std::vector<double> score_continuation(std::string_view prefix,
                                           std::string_view continuation) const override;
    std::size_t count_tokens(std::string_view text) const override;
    std::string name() const override;

    static constexpr const char* kBos = "<s>";

    double probability(const std::string& prev, const std::string& next) const;

private:
    std::map<std::pair<std::string, std::string>, double> table_;
    double fallback_;
};

/// Remote scoring endpoint. Wire contract:
///   POST {"model", "prefix", "continuation"} ->
///        {"token_logprobs": [..], "token_count": n}
/// Auth header taken from the SCORER_API_KEY environment variable.
class RemoteLogProbProvider final : public LogProbProvider {
public:
    RemoteLogProbProvider(std::string endpoint, std::string model, int timeout_seconds = 60);

    std::vector<double> score_continuation(std::string_view prefix,
                                           std::string_view continuation) const override;
    std::size_t count_tokens(std::string_view text) const override;
    std::string name() const override;

private:
    std::string endpoint_;
    std::string model_;
    int timeout_seconds_;
};

/// Content-addressed score cache wrapped around another provider. Keys are
/// hashes of (provider name, prefix, continuation), so shared prefixes are
/// never rescored and warm reruns are byte-identical.
class CachingLogProbProvider final : public LogProbProvider {
public:
    CachingLogProbProvider(std::shared_ptr<const LogProbProvider> inner,
                           std::filesystem::path cache_dir);

    std::vector<double> score_continuation(std::string_view prefix,
                                           std::string_view continuation) const override;
    std::size_t count_tokens(std::string_view text) const override;
    std::string name() const override;

private:
    std::shared_ptr<const LogProbProvider> inner_;
    std::filesystem::path cache_dir_;
    mutable std::mutex mutex_;
};

}  // namespace pol
