#pragma once

// Small text helpers shared by the CSV and model-file readers/writers.

#include <string>
#include <string_view>
#include <vector>

namespace hlds::text {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

std::vector<std::string> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

/// Strict parsers: the whole (trimmed) field must be consumed. Throw InputError
/// mentioning `what` on failure.
double parse_double(std::string_view field, std::string_view what);
long long parse_int(std::string_view field, std::string_view what);

} // namespace hlds::text
