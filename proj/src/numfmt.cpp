#include "mva/numfmt.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "mva/error.hpp"

namespace mva {

std::string format_number(double value) {
    if (value == 0.0) return std::signbit(value) ? "-0" : "0";
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const double mag = std::fabs(value);
    const auto fmt = (mag >= 1e-4 && mag < 1e17) ? std::chars_format::fixed : std::chars_format::scientific;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, fmt);
    return std::string(buf.data(), res.ptr);
}

double parse_number(std::string_view text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw Error(ErrorKind::MalformedNumber, "cannot parse number '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace mva
