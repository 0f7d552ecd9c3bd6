#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace kellybet::csv {

// Minimal delimiter-separated reader: no quoting, whitespace around fields trimmed.
std::vector<std::string_view> split(std::string_view line, char delim = ',');
std::string_view trim(std::string_view s);

double parse_double(std::string_view field, std::size_t line);
std::int64_t parse_int(std::string_view field, std::size_t line);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

/// Reads every line of `in`; strips a trailing '\r' and skips blank lines.
/// Each entry carries its 1-based line number.
struct Line {
    std::size_t number;
    std::string text;
};
std::vector<Line> read_lines(std::istream& in);

}  // namespace kellybet::csv
