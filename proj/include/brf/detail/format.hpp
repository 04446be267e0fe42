#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <system_error>

namespace brf::detail {

/// Locale-independent decimal formatting, 17 significant digits.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

/// Full-string double parse; returns false on trailing garbage or empty.
inline bool parse_double(std::string_view s, double& out) {
    std::size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return false;
    std::size_t end = s.find_last_not_of(" \t\r");
    s = s.substr(begin, end - begin + 1);
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace brf::detail
