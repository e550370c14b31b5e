#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace riskdyn::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

// RFC 4180 reader: quoted fields, doubled quotes, CRLF, embedded newlines.
Table read(std::istream& in);
Table read_file(const std::filesystem::path& path);

std::string escape(std::string_view field);
std::string join_row(const std::vector<std::string>& fields);

// Locale-independent number formatting.
std::string format_fixed(double value, int precision);
std::string format_roundtrip(double value);

// Strict parse of a whole field; returns false on trailing garbage or empty input.
bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, int& out);

std::string trim(std::string_view text);

}  // namespace riskdyn::csv
