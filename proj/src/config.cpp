#include "fairkit/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fairkit {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(Errc::config_parse, "config line " + std::to_string(line) + ": " + what);
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config config;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail(line_no, "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) fail(line_no, "empty section name");
      if (!config.sections_.count(section)) {
        config.section_order_.push_back(section);
        config.sections_[section];
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    if (section.empty()) fail(line_no, "key outside any [section]");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    auto& sec = config.sections_[section];
    if (sec.values.count(key)) fail(line_no, "duplicate key '" + key + "' in [" + section + "]");
    sec.key_order.push_back(key);
    sec.values[key] = value;
  }
  return config;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool Config::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  return it != sections_.end() && it->second.values.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  if (it == sections_.end())
    throw Error(Errc::invalid_config, "missing section [" + section + "]");
  auto kv = it->second.values.find(key);
  if (kv == it->second.values.end())
    throw Error(Errc::invalid_config, "missing key '" + key + "' in [" + section + "]");
  return kv->second;
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  const std::string raw = get(section, key);
  const char* begin = raw.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (raw.empty() || end != begin + raw.size())
    throw Error(Errc::invalid_config,
                "key '" + key + "' in [" + section + "]: not a number: '" + raw + "'");
  return v;
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t Config::get_int(const std::string& section, const std::string& key) const {
  const std::string raw = get(section, key);
  const char* begin = raw.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (raw.empty() || end != begin + raw.size())
    throw Error(Errc::invalid_config,
                "key '" + key + "' in [" + section + "]: not an integer: '" + raw + "'");
  return v;
}

std::int64_t Config::get_int_or(const std::string& section, const std::string& key,
                                std::int64_t fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

bool Config::get_bool_or(const std::string& section, const std::string& key,
                         bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string raw = get(section, key);
  if (raw == "true" || raw == "1" || raw == "yes") return true;
  if (raw == "false" || raw == "0" || raw == "no") return false;
  throw Error(Errc::invalid_config,
              "key '" + key + "' in [" + section + "]: not a boolean: '" + raw + "'");
}

std::vector<std::string> Config::get_list(const std::string& section,
                                          const std::string& key) const {
  const std::string raw = get(section, key);
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(raw);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  if (!sections_.count(section)) section_order_.push_back(section);
  auto& sec = sections_[section];
  if (!sec.values.count(key)) sec.key_order.push_back(key);
  sec.values[key] = value;
}

std::vector<std::pair<std::string, std::string>> Config::entries(
    const std::string& section) const {
  std::vector<std::pair<std::string, std::string>> out;
  auto it = sections_.find(section);
  if (it == sections_.end()) return out;
  for (const auto& key : it->second.key_order)
    out.emplace_back(key, it->second.values.at(key));
  return out;
}

std::string Config::to_text() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& name : section_order_) {
    if (!first) out << '\n';
    first = false;
    out << '[' << name << "]\n";
    for (const auto& [key, value] : entries(name)) out << key << " = " << value << '\n';
  }
  return out.str();
}

}  // namespace fairkit
