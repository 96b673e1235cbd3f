#pragma once

// Locale-independent number formatting and a small CSV reader.

#include <golu/errors.hpp>

#include <charconv>
#include <cmath>
#include <istream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace golu::csv {

/// Shortest representation that round-trips to the same double; '.' decimal point.
inline std::string num(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// 17 significant digits, as used for JSON output.
inline std::string num17(double v) {
    if (!std::isfinite(v)) {
        return num(v);
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                : comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

/// Parses a full field as a double ("nan" accepted). Throws DataError otherwise.
inline double parse_double(std::string_view field) {
    field = trim(field);
    if (field == "nan" || field == "NaN" || field == "NAN") {
        return std::nan("");
    }
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw DataError("not a number: '" + std::string(field) + "'");
    }
    return v;
}

/// Reads non-empty, non-comment ('#') lines split on commas.
inline std::vector<std::vector<std::string>> read_rows(std::istream& is) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(is, line)) {
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        rows.push_back(split_line(t));
    }
    return rows;
}

} // namespace golu::csv
