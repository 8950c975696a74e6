#include "railtap/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "railtap/error.hpp"

namespace railtap {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

const std::string* ConfigSection::find(std::string_view key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

const std::string& ConfigSection::get(std::string_view key) const {
  const std::string* v = find(key);
  if (!v) {
    throw Error(Errc::BAD_CONFIG, "missing key " + std::string(key) +
                                      (name.empty() ? "" : " in [" + name + "]"));
  }
  return *v;
}

std::string ConfigSection::get_or(std::string_view key,
                                  std::string_view fallback) const {
  const std::string* v = find(key);
  return v ? *v : std::string(fallback);
}

const ConfigSection* ConfigFile::find_section(std::string_view name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

ConfigFile parse_config_text(std::string_view text, std::string_view origin) {
  ConfigFile file;
  file.sections.push_back(ConfigSection{});
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw = eol == std::string_view::npos
                               ? text.substr(pos)
                               : text.substr(pos, eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw Error(Errc::BAD_CONFIG, std::string(origin) + ":" +
                                          std::to_string(line_no) +
                                          ": malformed section header");
      }
      ConfigSection section;
      section.name = std::string(trim(line.substr(1, line.size() - 2)));
      file.sections.push_back(std::move(section));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::BAD_CONFIG, std::string(origin) + ":" +
                                        std::to_string(line_no) +
                                        ": expected key = value");
    }
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw Error(Errc::BAD_CONFIG, std::string(origin) + ":" +
                                        std::to_string(line_no) +
                                        ": empty key");
    }
    file.sections.back().entries.emplace_back(std::string(key),
                                              std::string(value));
  }
  return file;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IO_ERROR, "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

long long parse_config_int(std::string_view value, std::string_view context) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(Errc::BAD_CONFIG,
                "expected integer for " + std::string(context),
                std::string(value));
  }
  return out;
}

double parse_config_double(std::string_view value, std::string_view context) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(Errc::BAD_CONFIG, "expected number for " + std::string(context),
                std::string(value));
  }
  return out;
}

bool parse_config_bool(std::string_view value, std::string_view context) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error(Errc::BAD_CONFIG, "expected bool for " + std::string(context),
              std::string(value));
}

std::vector<double> parse_double_list(std::string_view value,
                                      std::string_view context) {
  std::vector<double> out;
  for (const std::string& tok : parse_token_list(value)) {
    out.push_back(parse_config_double(tok, context));
  }
  return out;
}

std::vector<std::string> parse_token_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t comma = value.find(',', start);
    std::string_view piece = comma == std::string_view::npos
                                 ? value.substr(start)
                                 : value.substr(start, comma - start);
    piece = trim(piece);
    if (!piece.empty()) out.emplace_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace railtap
