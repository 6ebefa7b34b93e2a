// numfmt.hpp — shortest round-trip decimal text for doubles.
#pragma once

#include <charconv>
#include <string>
#include <string_view>

namespace imcpack {

inline std::string fmt_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

// Throws std::invalid_argument when `s` is not entirely a number.
double parse_double(std::string_view s);

}  // namespace imcpack
