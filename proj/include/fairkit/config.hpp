#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairkit/error.hpp"

namespace fairkit {

// Declarative run config: `[section]` headers over `key = value` lines,
// '#' comments, blank lines ignored. Section and key order are preserved so
// a config can be re-serialized canonically.
class Config {
 public:
  static Config parse(const std::string& text);       // throws config_parse with line numbers
  static Config load(const std::string& path);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key) const;
  std::int64_t get_int_or(const std::string& section, const std::string& key,
                          std::int64_t fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;
  // Comma-separated list value.
  std::vector<std::string> get_list(const std::string& section, const std::string& key) const;

  void set(const std::string& section, const std::string& key, const std::string& value);

  const std::vector<std::string>& section_names() const { return section_order_; }
  std::vector<std::pair<std::string, std::string>> entries(const std::string& section) const;

  // Canonical text form; parsing it back yields an identical config.
  std::string to_text() const;

 private:
  struct Section {
    std::vector<std::string> key_order;
    std::map<std::string, std::string> values;
  };
  std::vector<std::string> section_order_;
  std::map<std::string, Section> sections_;
};

}  // namespace fairkit
