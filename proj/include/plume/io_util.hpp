#ifndef PLUME_IO_UTIL_HPP
#define PLUME_IO_UTIL_HPP

#include <cctype>
#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "plume/errors.hpp"

namespace plume {

/// Format a double with 17 significant digits (round-trips exactly).
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

/// Strict double parser. `line` and `col` locate the token in the source
/// text for error reporting (col is 1-based across the raw line).
inline double parse_double_at(std::string_view token, int line, int col) {
    const std::string t = trim(token);
    if (t.empty()) throw ParseError(line, col, "empty numeric field");
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw ParseError(line, col, "expected a number, got '" + t + "'");
    return value;
}

inline long long parse_int_at(std::string_view token, int line, int col) {
    const std::string t = trim(token);
    if (t.empty()) throw ParseError(line, col, "empty integer field");
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw ParseError(line, col, "expected an integer, got '" + t + "'");
    return value;
}

/// Split on a delimiter, remembering each field's 1-based start column.
struct CsvField {
    std::string text;
    int col;
};

inline std::vector<CsvField> split_fields(std::string_view line, char delim) {
    std::vector<CsvField> out;
    int col = 1;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == delim) {
            out.push_back({std::string(line.substr(start, i - start)), col});
            col = static_cast<int>(i) + 2;
            start = i + 1;
        }
    }
    return out;
}

} // namespace plume

#endif
