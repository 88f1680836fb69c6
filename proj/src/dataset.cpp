#include "fairkit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <set>

namespace fairkit {

Dataset::Dataset(Schema schema, std::vector<std::int64_t> row_ids, std::vector<Column> columns,
                 std::vector<std::uint8_t> synthetic_flags)
    : schema_(std::move(schema)),
      row_ids_(std::move(row_ids)),
      columns_(std::move(columns)),
      synthetic_flags_(std::move(synthetic_flags)) {
  schema_.validate();
  if (columns_.size() != schema_.columns.size())
    throw Error(Errc::length_mismatch, "column count does not match schema");
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const bool num = schema_.columns[c].kind == ColumnKind::numeric;
    const std::size_t n = num ? columns_[c].numeric.size() : columns_[c].categorical.size();
    if (n != row_ids_.size())
      throw Error(Errc::length_mismatch, "column '" + schema_.columns[c].name + "' has " +
                                             std::to_string(n) + " values for " +
                                             std::to_string(row_ids_.size()) + " rows");
    if (num && !columns_[c].categorical.empty())
      throw Error(Errc::type_mismatch,
                  "numeric column '" + schema_.columns[c].name + "' carries categorical storage");
    if (!num && !columns_[c].numeric.empty())
      throw Error(Errc::type_mismatch,
                  "categorical column '" + schema_.columns[c].name + "' carries numeric storage");
  }
  if (!synthetic_flags_.empty() && synthetic_flags_.size() != row_ids_.size())
    throw Error(Errc::length_mismatch, "synthetic flag count does not match rows");
}

const std::vector<double>& Dataset::numeric(std::size_t col) const {
  if (schema_.columns[col].kind != ColumnKind::numeric)
    throw Error(Errc::type_mismatch,
                "column '" + schema_.columns[col].name + "' is not numeric");
  return columns_[col].numeric;
}

const std::vector<std::string>& Dataset::categorical(std::size_t col) const {
  if (schema_.columns[col].kind != ColumnKind::categorical)
    throw Error(Errc::type_mismatch,
                "column '" + schema_.columns[col].name + "' is not categorical");
  return columns_[col].categorical;
}

Record Dataset::record(std::size_t row) const {
  Record rec;
  rec.reserve(n_cols());
  for (std::size_t c = 0; c < n_cols(); ++c) {
    if (schema_.columns[c].kind == ColumnKind::numeric)
      rec.emplace_back(columns_[c].numeric[row]);
    else
      rec.emplace_back(columns_[c].categorical[row]);
  }
  return rec;
}

std::string Dataset::value_as_string(std::size_t row, std::size_t col) const {
  if (schema_.columns[col].kind == ColumnKind::categorical)
    return columns_[col].categorical[row];
  double v = columns_[col].numeric[row];
  // Trim the representation the way the CSV writer does: shortest round-trip.
  char buf[32];
  int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  for (int prec = 1; prec < 17; ++prec) {
    char probe[32];
    std::snprintf(probe, sizeof probe, "%.*g", prec, v);
    if (std::strtod(probe, nullptr) == v) {
      return probe;
    }
  }
  return std::string(buf, buf + len);
}

std::vector<int> Dataset::labels01() const {
  const auto& vals = label_values();
  std::vector<int> out(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i)
    out[i] = vals[i] == schema_.favorable_label ? 1 : 0;
  return out;
}

std::vector<int> Dataset::groups01() const {
  const auto& vals = protected_values();
  std::vector<int> out(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i)
    out[i] = vals[i] == schema_.privileged_value ? 1 : 0;
  return out;
}

const std::vector<std::string>& Dataset::label_values() const {
  return categorical(schema_.label_index());
}

const std::vector<std::string>& Dataset::protected_values() const {
  return categorical(schema_.protected_index());
}

void Dataset::set_synthetic_flags(std::vector<std::uint8_t> flags) {
  if (!flags.empty() && flags.size() != row_ids_.size())
    throw Error(Errc::length_mismatch, "synthetic flag count does not match rows");
  synthetic_flags_ = std::move(flags);
}

std::vector<std::string> Dataset::observed_values(std::size_t col) const {
  const auto& vals = categorical(col);
  std::set<std::string> uniq(vals.begin(), vals.end());
  return {uniq.begin(), uniq.end()};
}

Dataset Dataset::strip_synthetic() const {
  if (synthetic_flags_.empty()) return *this;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n_rows(); ++i)
    if (!synthetic_flags_[i]) keep.push_back(i);
  std::vector<std::int64_t> ids;
  ids.reserve(keep.size());
  for (auto i : keep) ids.push_back(row_ids_[i]);
  std::vector<Column> cols(n_cols());
  for (std::size_t c = 0; c < n_cols(); ++c) {
    if (schema_.columns[c].kind == ColumnKind::numeric) {
      cols[c].numeric.reserve(keep.size());
      for (auto i : keep) cols[c].numeric.push_back(columns_[c].numeric[i]);
    } else {
      cols[c].categorical.reserve(keep.size());
      for (auto i : keep) cols[c].categorical.push_back(columns_[c].categorical[i]);
    }
  }
  return Dataset(schema_, std::move(ids), std::move(cols));
}

Dataset bin_numeric_columns(const Dataset& data, int bins, BinningInfo* info) {
  if (bins < 1) throw Error(Errc::invalid_config, "bin count must be at least 1");
  Schema schema = data.schema();
  std::vector<Column> cols(data.n_cols());
  for (std::size_t c = 0; c < data.n_cols(); ++c) {
    if (schema.columns[c].kind != ColumnKind::numeric) {
      cols[c].categorical = data.categorical(c);
      continue;
    }
    const auto& vals = data.numeric(c);
    double lo = INFINITY, hi = -INFINITY;
    for (double v : vals) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (vals.empty()) lo = hi = 0.0;
    std::vector<double> edges(bins + 1);
    if (lo == hi) {
      // Constant column: everything lands in bin 0.
      for (int b = 0; b <= bins; ++b) edges[b] = lo + b;
    } else {
      for (int b = 0; b <= bins; ++b) edges[b] = lo + (hi - lo) * b / bins;
    }
    cols[c].categorical.reserve(vals.size());
    for (double v : vals) {
      int b;
      if (lo == hi) {
        b = 0;
      } else {
        b = static_cast<int>((v - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
      }
      cols[c].categorical.push_back("b" + std::to_string(b));
    }
    if (info) info->edges[schema.columns[c].name] = std::move(edges);
    schema.columns[c].kind = ColumnKind::categorical;
  }
  return Dataset(std::move(schema), data.row_ids(), std::move(cols),
                 data.synthetic_flags());
}

bool datasets_equal(const Dataset& a, const Dataset& b) {
  if (a.n_rows() != b.n_rows() || a.n_cols() != b.n_cols()) return false;
  if (a.row_ids() != b.row_ids()) return false;
  for (std::size_t c = 0; c < a.n_cols(); ++c) {
    if (a.schema().columns[c].name != b.schema().columns[c].name) return false;
    if (a.schema().columns[c].kind != b.schema().columns[c].kind) return false;
    if (a.schema().columns[c].kind == ColumnKind::numeric) {
      if (a.numeric(c) != b.numeric(c)) return false;
    } else {
      if (a.categorical(c) != b.categorical(c)) return false;
    }
  }
  return true;
}

}  // namespace fairkit
