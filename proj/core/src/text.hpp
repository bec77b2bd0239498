#pragma once

// Small text helpers shared by the parsers and writers.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace codingsim::text {

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);

std::string_view trim(std::string_view s);
std::string lower(std::string_view s);

/// Splits one CSV record on commas, honouring double-quoted fields.
std::vector<std::string> split_csv(std::string_view line);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view s);

/// Splits on `sep`, trimming each piece; empty input gives an empty vector.
std::vector<std::string> split(std::string_view s, char sep);

std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t h = 0xCBF29CE484222325ULL) noexcept;

std::string hex64(std::uint64_t v);

}  // namespace codingsim::text
