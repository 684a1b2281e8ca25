#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wsqos {

// Shortest decimal form that strtod parses back to the same double.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

std::string trim_copy(std::string_view text);
std::string lowercase_copy(std::string_view text);

// One CSV record; handles double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_field(std::string_view raw);

}  // namespace wsqos
