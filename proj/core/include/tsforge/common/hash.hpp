#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace tsforge {

/// Lower-case hex SHA-256 of a byte string.
[[nodiscard]] std::string sha256_hex(std::string_view bytes);

/// Lower-case hex SHA-256 of a file's contents.
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

/// Reads a whole file into memory.
[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

/// Writes a whole file, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace tsforge
