#include "pol/strategy.hpp"

#include "pol/errors.hpp"

namespace pol {

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::all_chain: return "all_chain";
        case Strategy::reasoning_only: return "reasoning_only";
        case Strategy::verification_only: return "verification_only";
    }
    return "all_chain";
}

std::string_view to_string(Granularity g) {
    return g == Granularity::node ? "node" : "connection";
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "all" || s == "all_chain") return Strategy::all_chain;
    if (s == "reasoning" || s == "reasoning_only") return Strategy::reasoning_only;
    if (s == "verification" || s == "verification_only") return Strategy::verification_only;
    throw Error(ErrorCode::invalid_argument, "unknown strategy: " + s);
}

Granularity granularity_from_string(const std::string& s) {
    if (s == "node") return Granularity::node;
    if (s == "connection") return Granularity::connection;
    throw Error(ErrorCode::invalid_argument, "unknown granularity: " + s);
}

}  // namespace pol
