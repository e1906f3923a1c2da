#pragma once

// Small parsing helpers shared by the file readers.

#include "gccf/error.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace gccf::text {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::string strip_comment(std::string_view line) {
    return std::string(trim(line.substr(0, line.find('#'))));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view s) {
    s = trim(s);
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
        throw Error(ErrorCode::ParseError, "not a number: '" + std::string(s) + "'");
    return v;
}

template <typename T>
std::vector<T> parse_list(std::string_view s, char sep = ',') {
    std::vector<T> out;
    if (trim(s).empty()) return out;
    for (const auto& tok : split(s, sep)) out.push_back(parse_number<T>(tok));
    return out;
}

/// Whitespace-separated integers on one line.
inline std::vector<std::int64_t> parse_ints_ws(const std::string& line) {
    std::vector<std::int64_t> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(parse_number<std::int64_t>(tok));
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace gccf::text
