#pragma once

#include <string>
#include <string_view>

namespace mva {

/// Canonical text form of a double: shortest representation that round-trips
/// (at most 17 significant digits), '.' separator, plain positional notation
/// for magnitudes in [1e-4, 1e17) and scientific notation otherwise.
std::string format_number(double value);

/// Inverse of format_number for any decimal/scientific literal. Throws
/// Error{MalformedNumber} unless the whole input is consumed.
double parse_number(std::string_view text);

}  // namespace mva
