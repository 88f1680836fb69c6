#pragma once

// Shared builders for the test suites: tiny hand-specified datasets and a
// hand-rolled random-dataset generator for property tests.

#include <cstdlib>
#include <string>
#include <vector>

#include "fairkit/dataset.hpp"
#include "fairkit/rng.hpp"
#include "fairkit/schema.hpp"

namespace testutil {

// f0..f{n-1} categorical features, then "prot", then "label".
// favorable = "1", privileged = "1".
inline fairkit::Schema binary_schema(std::size_t n_features) {
  fairkit::Schema s;
  for (std::size_t i = 0; i < n_features; ++i)
    s.columns.push_back({"f" + std::to_string(i), fairkit::ColumnKind::categorical,
                         fairkit::ColumnRole::feature});
  s.columns.push_back(
      {"prot", fairkit::ColumnKind::categorical, fairkit::ColumnRole::protected_attr});
  s.columns.push_back({"label", fairkit::ColumnKind::categorical, fairkit::ColumnRole::label});
  s.favorable_label = "1";
  s.privileged_value = "1";
  return s;
}

// Rows as strings in schema column order; numeric columns are parsed.
inline fairkit::Dataset dataset_from_strings(const fairkit::Schema& schema,
                                             const std::vector<std::vector<std::string>>& rows) {
  std::vector<fairkit::Column> cols(schema.columns.size());
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      if (schema.columns[c].kind == fairkit::ColumnKind::numeric)
        cols[c].numeric.push_back(std::strtod(row[c].c_str(), nullptr));
      else
        cols[c].categorical.push_back(row[c]);
    }
  }
  std::vector<std::int64_t> ids(rows.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::int64_t>(i);
  return fairkit::Dataset(schema, ids, cols);
}

// Random all-binary dataset guaranteed to contain both labels and both groups.
inline fairkit::Dataset random_binary_dataset(fairkit::Rng& rng, std::size_t n,
                                              std::size_t n_features) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row;
    for (std::size_t f = 0; f < n_features; ++f) row.push_back(rng.bernoulli(0.5) ? "1" : "0");
    row.push_back(i < 2 ? (i == 0 ? "1" : "0") : (rng.bernoulli(0.5) ? "1" : "0"));
    row.push_back(i < 2 ? (i == 0 ? "1" : "0") : (rng.bernoulli(0.5) ? "1" : "0"));
    rows.push_back(std::move(row));
  }
  return dataset_from_strings(binary_schema(n_features), rows);
}

}  // namespace testutil
