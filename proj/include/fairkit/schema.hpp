#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fairkit {

enum class ColumnKind { numeric, categorical };
enum class ColumnRole { feature, protected_attr, label };

const char* to_string(ColumnKind kind);
const char* to_string(ColumnRole role);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::categorical;
  ColumnRole role = ColumnRole::feature;
};

// Column layout of a dataset plus the two distinguished values: which label
// value counts as favorable and which protected value counts as privileged.
struct Schema {
  std::vector<ColumnSpec> columns;
  std::string favorable_label;
  std::string privileged_value;

  // Throws Error{invalid_config} unless exactly one label column and exactly
  // one protected column exist, both categorical, and names are unique and
  // non-empty. The two-observed-values invariant is checked against data at
  // dataset construction, not here.
  void validate() const;

  std::size_t index_of(const std::string& name) const;  // throws missing_column
  bool has_column(const std::string& name) const;
  std::size_t label_index() const;
  std::size_t protected_index() const;
  std::vector<std::size_t> feature_indices() const;
};

// Declarative schema config. One `name kind role` line per column, plus
// `favorable <value>` and `privileged <value>` directives. Blank lines and
// lines starting with '#' are ignored.
Schema parse_schema_text(const std::string& text);
Schema load_schema(const std::string& path);
std::string schema_to_text(const Schema& schema);

}  // namespace fairkit
