#pragma once

#include <string_view>

namespace mva {

enum class LocalCase { RegularC, RegularBOnly, TwoBranches, Isolated, OneSided, UniqueOdd, Degenerate };

/// "REGULAR_C", "TWO_BRANCHES", ...
std::string_view to_string(LocalCase c);
LocalCase local_case_from_string(std::string_view s);

}  // namespace mva
