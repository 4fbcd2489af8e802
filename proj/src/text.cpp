#include "hlds/text.hpp"

#include "hlds/error.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace hlds::text {

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) {
        throw Error("cannot format floating-point value");
    }
    return std::string(buf, end);
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t begin = 0;
    while (true) {
        const auto pos = line.find(sep, begin);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(begin));
            return out;
        }
        out.emplace_back(line.substr(begin, pos - begin));
        begin = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view field, std::string_view what) {
    field = trim(field);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
        throw InputError("invalid number for " + std::string(what) + ": '" + std::string(field) + "'");
    }
    return value;
}

long long parse_int(std::string_view field, std::string_view what) {
    field = trim(field);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw InputError("invalid integer for " + std::string(what) + ": '" + std::string(field) + "'");
    }
    return value;
}

} // namespace hlds::text
