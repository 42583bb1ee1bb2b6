#ifndef FACET_TEXT_HPP
#define FACET_TEXT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace facet::text {

/// Splits on every comma; the formats here never quote fields.
std::vector<std::string_view> split(std::string_view line, char sep = ',');

std::string_view trim(std::string_view s) noexcept;

/// Full-string parses; nullopt on trailing garbage, overflow or empty input.
std::optional<double> parse_double(std::string_view s) noexcept;
std::optional<std::int64_t> parse_int(std::string_view s) noexcept;
std::optional<std::uint64_t> parse_uint(std::string_view s) noexcept;

/// Shortest representation that parses back to the same double.
std::string format_shortest(double value);

/// printf-style "%.<digits>f", with negative zero printed as zero.
std::string format_fixed(double value, int digits);

std::string hex64(std::uint64_t value);

/// Reads one LF-terminated line, dropping a trailing CR. Returns false at EOF.
bool read_line(std::istream& in, std::string& line);

}  // namespace facet::text

#endif
