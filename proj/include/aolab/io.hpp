#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace aolab {

/// Whole-file read; throws ConfigError when the file cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over `path`, so readers
/// never observe a partial artifact.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace aolab
