#include "sci/config_file.hpp"

#include <fstream>
#include <istream>

#include "sci/errors.hpp"

namespace sci {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ConfigEntries parse_config(std::istream& in) {
  ConfigEntries entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(t.substr(0, eq));
    if (key.starts_with("--")) key.erase(0, 2);
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    entries.emplace_back(std::move(key), trim(t.substr(eq + 1)));
  }
  return entries;
}

ConfigEntries parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

}  // namespace sci
