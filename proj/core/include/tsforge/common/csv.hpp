#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tsforge::csv {

using Row = std::vector<std::string>;

/// Splits one line on commas. Double-quoted fields may contain commas and "" escapes.
[[nodiscard]] Row split_line(std::string_view line);

/// Reads every non-blank line of a UTF-8 file (a leading BOM is dropped).
[[nodiscard]] std::vector<Row> read_file(const std::filesystem::path& path);

/// Joins fields, quoting those that contain separators or quotes.
[[nodiscard]] std::string join(const Row& fields);

/// Full round-trip precision ("%.17g").
[[nodiscard]] std::string format_double(double value);

/// Strict parse of a finite or non-finite decimal; false when any character is left over.
[[nodiscard]] bool parse_double(std::string_view text, double& out);

[[nodiscard]] std::string_view trim(std::string_view text) noexcept;

/// Writes `rows` after `header` with '\n' line endings.
void write_file(const std::filesystem::path& path, const Row& header,
                const std::vector<Row>& rows);

}  // namespace tsforge::csv
