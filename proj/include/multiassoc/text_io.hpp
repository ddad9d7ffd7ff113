#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace multiassoc {

/// Shortest decimal form that parses back to the same double. Locale
/// independent, so emitted files are byte-stable across runs.
std::string format_double(double value);

/// Strict full-string parse. Returns false on trailing garbage or overflow.
bool parse_double(std::string_view s, double& out);
bool parse_uint(std::string_view s, uint64_t& out);

std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_whitespace(std::string_view s);

/// Removes a trailing '\r' in place (files written on Windows).
void strip_cr(std::string& line);

bool is_blank(std::string_view s);

}  // namespace multiassoc
