#pragma once

// CSV and text-file helpers shared by the CLI and the bindings.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aqurate {

/// Shortest round-trip decimal form, locale independent.
std::string format_double(double v);

/// Comma-joined row followed by '\n'.
std::string csv_line(const std::vector<std::string>& fields);

/// Writes through a temporary in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
};

/// Minimal reader: no quoting, '#' comment lines and blank lines skipped.
/// Throws std::runtime_error on ragged rows.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

std::optional<double> parse_optional_double(std::string_view field);
double parse_double(std::string_view field);

}  // namespace aqurate
