#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace sci {

/// Flat key=value settings. Blank lines and lines starting with '#' are
/// ignored, whitespace around keys and values is trimmed, and a leading
/// "--" on a key is dropped. Order is preserved.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Throws ConfigError on a line without '=' or with an empty key.
ConfigEntries parse_config(std::istream& in);
/// Throws IoError if the file cannot be opened.
ConfigEntries parse_config_file(const std::filesystem::path& path);

}  // namespace sci
