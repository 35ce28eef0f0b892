#pragma once

#include <string>
#include <string_view>

namespace pol {

/// Which part of the graph pruning targets.
enum class Strategy { all_chain, reasoning_only, verification_only };

/// What kind of unit gets removed.
enum class Granularity { node, connection };

std::string_view to_string(Strategy s);
std::string_view to_string(Granularity g);

/// Accepts both the full names and the CLI short forms
/// (all|reasoning|verification, node|connection).
Strategy strategy_from_string(const std::string& s);
Granularity granularity_from_string(const std::string& s);

}  // namespace pol
