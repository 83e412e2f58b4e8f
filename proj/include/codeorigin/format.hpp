#pragma once

#include <charconv>
#include <string>

namespace codeorigin {

/// Shortest text that parses back to exactly `value`.
inline std::string format_double(double value)
{
    char buf[32];
    auto result = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, result.ptr);
}

} // namespace codeorigin
