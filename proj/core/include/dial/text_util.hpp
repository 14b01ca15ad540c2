#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

namespace dial {

/// Shortest representation that parses back to the same bits.
inline std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view token) {
    double value = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) return std::nullopt;
    return value;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view token) {
    Int value{};
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) return std::nullopt;
    return value;
}

}  // namespace dial
