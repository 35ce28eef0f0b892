#include "pol/providers.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "pol/errors.hpp"
#include "pol/text.hpp"

namespace pol {

std::vector<std::string> whitespace_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_ws(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_ws(text[i])) ++i;
        if (i > start) tokens.emplace_back(text.substr(start, i - start));
    }
    return tokens;
}

std::size_t approx_subword_token_count(std::string_view text) {
    auto is_letter = [](unsigned char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    };
    auto is_digit = [](unsigned char c) { return c >= '0' && c <= '9'; };

    std::size_t total = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_ws(text[i])) {
            ++i;
        } else if (is_letter(c)) {
            std::size_t len = 0;
            while (i < text.size() && is_letter(static_cast<unsigned char>(text[i]))) ++i, ++len;
            total += (len + 3) / 4;
        } else if (is_digit(c)) {
            std::size_t len = 0;
            while (i < text.size() && is_digit(static_cast<unsigned char>(text[i]))) ++i, ++len;
            total += (len + 2) / 3;
        } else if (c >= 0x80) {
            // Multibyte sequences: roughly one token per three bytes.
            std::size_t len = 0;
            while (i < text.size() && static_cast<unsigned char>(text[i]) >= 0x80) ++i, ++len;
            total += (len + 2) / 3;
        } else {
            ++total;
            ++i;
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// UniformLogProbProvider

UniformLogProbProvider::UniformLogProbProvider(std::size_t vocab_size) : vocab_size_(vocab_size) {
    if (vocab_size_ == 0) {
        throw Error(ErrorCode::invalid_argument, "uniform provider needs vocab size >= 1");
    }
}

std::vector<double> UniformLogProbProvider::score_continuation(std::string_view,
                                                               std::string_view continuation) const {
    std::size_t n = whitespace_tokens(continuation).size();
    return std::vector<double>(n, -std::log(static_cast<double>(vocab_size_)));
}

std::size_t UniformLogProbProvider::count_tokens(std::string_view text) const {
    return whitespace_tokens(text).size();
}

std::string UniformLogProbProvider::name() const {
    return "uniform-v" + std::to_string(vocab_size_);
}

// ---------------------------------------------------------------------------
// BigramLogProbProvider

BigramLogProbProvider BigramLogProbProvider::from_tsv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::io, "cannot open bigram table: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_tsv_text(buf.str(), path.string());
}

BigramLogProbProvider BigramLogProbProvider::from_tsv_text(std::string_view tsv,
                                                           std::string_view origin) {
    std::map<std::pair<std::string, std::string>, double> table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= tsv.size()) {
        std::size_t eol = tsv.find('\n', pos);
        std::string line(tsv.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                       : eol - pos));
        pos = eol == std::string_view::npos ? tsv.size() + 1 : eol + 1;
        ++line_no;
        if (normalize_ws(line).empty() || line[0] == '#') continue;

        std::size_t t1 = line.find('\t');
        std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) {
            throw Error(ErrorCode::schema, std::string(origin) + " line " + std::to_string(line_no) +
                                               ": expected prev<TAB>next<TAB>prob");
        }
        std::string prev = line.substr(0, t1);
        std::string next = line.substr(t1 + 1, t2 - t1 - 1);
        double prob = 0.0;
        try {
            prob = std::stod(line.substr(t2 + 1));
        } catch (const std::exception&) {
            throw Error(ErrorCode::schema, std::string(origin) + " line " + std::to_string(line_no) +
                                               ": malformed probability");
        }
        if (!(prob > 0.0)) {
            throw Error(ErrorCode::schema, std::string(origin) + " line " + std::to_string(line_no) +
                                               ": probability must be > 0");
        }
        table[{std::move(prev), std::move(next)}] = prob;
    }
    return BigramLogProbProvider(std::move(table));
}

BigramLogProbProvider::BigramLogProbProvider(
    std::map<std::pair<std::string, std::string>, double> table)
    : table_(std::move(table)) {
    std::vector<std::string> vocab;
    for (const auto& [key, _] : table_) {
        if (vocab.empty() || vocab.back() != key.second) vocab.push_back(key.second);
    }
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
    fallback_ = vocab.empty() ? 1.0 : 1.0 / static_cast<double>(vocab.size());
}

double BigramLogProbProvider::probability(const std::string& prev, const std::string& next) const {
    auto it = table_.find({prev, next});
    return it != table_.end() ? it->second : fallback_;
}

std::vector<double> BigramLogProbProvider::score_continuation(std::string_view prefix,
                                                              std::string_view continuation) const {
    std::vector<std::string> ctx = whitespace_tokens(prefix);
    std::vector<std::string> cont = whitespace_tokens(continuation);
    std::string prev = ctx.empty() ? std::string(kBos) : ctx.back();

    std::vector<double> logprobs;
    logprobs.reserve(cont.size());
    for (const std::string& tok : cont) {
        logprobs.push_back(std::log(probability(prev, tok)));
        prev = tok;
    }
    return logprobs;
}

std::size_t BigramLogProbProvider::count_tokens(std::string_view text) const {
    return whitespace_tokens(text).size();
}

std::string BigramLogProbProvider::name() const {
    return "bigram-" + std::to_string(table_.size());
}

// ---------------------------------------------------------------------------
// RemoteLogProbProvider

namespace {

std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    // "http://host:port/path" -> {"http://host:port", "/path"}
    std::size_t scheme = endpoint.find("://");
    std::size_t path_start =
        endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start == std::string::npos) {
        return {endpoint, "/"};
    }
    return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

}  // namespace

RemoteLogProbProvider::RemoteLogProbProvider(std::string endpoint, std::string model,
                                             int timeout_seconds)
    : endpoint_(std::move(endpoint)), model_(std::move(model)), timeout_seconds_(timeout_seconds) {}

std::vector<double> RemoteLogProbProvider::score_continuation(std::string_view prefix,
                                                              std::string_view continuation) const {
    auto [host, path] = split_endpoint(endpoint_);
    httplib::Client client(host);
    client.set_read_timeout(timeout_seconds_, 0);
    client.set_connection_timeout(timeout_seconds_, 0);

    nlohmann::json body = {
        {"model", model_},
        {"prefix", std::string(prefix)},
        {"continuation", std::string(continuation)},
    };
    httplib::Headers headers;
    if (const char* key = std::getenv("SCORER_API_KEY"); key && *key) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res || res->status != 200) {
        throw Error(ErrorCode::transport,
                    "scorer endpoint failed: " + endpoint_ +
                        (res ? " (status " + std::to_string(res->status) + ")" : " (no response)"));
    }
    nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("token_logprobs") ||
        !reply["token_logprobs"].is_array()) {
        throw Error(ErrorCode::transport, "scorer endpoint returned malformed payload");
    }
    std::vector<double> out;
    for (const auto& v : reply["token_logprobs"]) out.push_back(v.get<double>());
    return out;
}

std::size_t RemoteLogProbProvider::count_tokens(std::string_view text) const {
    auto [host, path] = split_endpoint(endpoint_);
    httplib::Client client(host);
    client.set_read_timeout(timeout_seconds_, 0);
    client.set_connection_timeout(timeout_seconds_, 0);

    nlohmann::json body = {
        {"model", model_},
        {"prefix", ""},
        {"continuation", std::string(text)},
    };
    httplib::Headers headers;
    if (const char* key = std::getenv("SCORER_API_KEY"); key && *key) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res || res->status != 200) {
        throw Error(ErrorCode::transport, "scorer endpoint failed: " + endpoint_);
    }
    nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("token_count")) {
        throw Error(ErrorCode::transport, "scorer endpoint returned malformed payload");
    }
    return reply["token_count"].get<std::size_t>();
}

std::string RemoteLogProbProvider::name() const {
    return "remote:" + model_ + "@" + endpoint_;
}

// ---------------------------------------------------------------------------
// CachingLogProbProvider

CachingLogProbProvider::CachingLogProbProvider(std::shared_ptr<const LogProbProvider> inner,
                                               std::filesystem::path cache_dir)
    : inner_(std::move(inner)), cache_dir_(std::move(cache_dir)) {
    std::filesystem::create_directories(cache_dir_);
}

std::vector<double> CachingLogProbProvider::score_continuation(std::string_view prefix,
                                                               std::string_view continuation) const {
    std::uint64_t h = fnv1a(inner_->name());
    h = fnv1a(prefix, h);
    h = fnv1a("\x1f", h);
    h = fnv1a(continuation, h);
    std::filesystem::path file = cache_dir_ / (hex64(h) + ".score.json");

    {
        std::lock_guard<std::mutex> lock(mutex_);
        std::ifstream in(file, std::ios::binary);
        if (in) {
            nlohmann::json cached = nlohmann::json::parse(in, nullptr, false);
            if (!cached.is_discarded() && cached.contains("token_logprobs")) {
                std::vector<double> out;
                for (const auto& v : cached["token_logprobs"]) out.push_back(v.get<double>());
                return out;
            }
        }
    }

    std::vector<double> scores = inner_->score_continuation(prefix, continuation);

    std::lock_guard<std::mutex> lock(mutex_);
    nlohmann::json record = {{"token_logprobs", scores}};
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    out << record.dump();
    return scores;
}

std::size_t CachingLogProbProvider::count_tokens(std::string_view text) const {
    return inner_->count_tokens(text);
}

std::string CachingLogProbProvider::name() const {
    return inner_->name();
}

}  // namespace pol
