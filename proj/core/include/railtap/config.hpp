#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace railtap {

/// One `[name]` group of `key = value` entries, in file order. The unnamed
/// preamble before the first header is the section with an empty name.
struct ConfigSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(std::string_view key) const;
  bool has(std::string_view key) const { return find(key) != nullptr; }
  /// Throws Error{BAD_CONFIG} when the key is absent.
  const std::string& get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string_view fallback) const;
};

struct ConfigFile {
  std::vector<ConfigSection> sections;

  const ConfigSection* find_section(std::string_view name) const;
  /// The unnamed preamble; always present, possibly empty.
  const ConfigSection& preamble() const { return sections.front(); }
};

/// Parses `key = value` lines with `#` comment lines, blank lines, and
/// optional `[section]` headers. `origin` names the source in error messages.
ConfigFile parse_config_text(std::string_view text,
                             std::string_view origin = "<string>");
ConfigFile load_config(const std::string& path);

/// Typed value parsers; `context` names the key in error messages.
long long parse_config_int(std::string_view value, std::string_view context);
double parse_config_double(std::string_view value, std::string_view context);
bool parse_config_bool(std::string_view value, std::string_view context);
std::vector<double> parse_double_list(std::string_view value,
                                      std::string_view context);
std::vector<std::string> parse_token_list(std::string_view value);

std::string_view trim(std::string_view s);

}  // namespace railtap
