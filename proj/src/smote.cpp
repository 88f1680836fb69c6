#include "fairkit/smote.hpp"

#include <algorithm>

#include "fairkit/metrics.hpp"
#include "fairkit/rng.hpp"

namespace fairkit {

Dataset smote_augment(const Dataset& data, std::size_t k, const std::string& protected_value,
                      const std::string& label_value, std::size_t count, std::uint64_t seed,
                      WarningLog* warnings) {
  if (k < 1) throw Error(Errc::invalid_config, "k must be at least 1");

  const auto& labels = data.label_values();
  const auto& groups = data.protected_values();
  std::vector<std::size_t> cell;
  for (std::size_t r = 0; r < data.n_rows(); ++r)
    if (groups[r] == protected_value && labels[r] == label_value) cell.push_back(r);
  if (cell.size() < 2)
    throw Error(Errc::cell_too_small, "cell (" + protected_value + ", " + label_value +
                                          ") has " + std::to_string(cell.size()) +
                                          " rows; need at least 2");
  if (k > cell.size() - 1) {
    warn(warnings, "k = " + std::to_string(k) + " exceeds cell size - 1; clamped to " +
                       std::to_string(cell.size() - 1));
    k = cell.size() - 1;
  }

  // Neighborhoods inside the cell, under the shared feature-space metric.
  // When every feature column is degenerate within the cell the rows are
  // indistinguishable there, so neighbor order falls back to row_id.
  std::vector<Column> cell_cols(data.n_cols());
  for (std::size_t c = 0; c < data.n_cols(); ++c) {
    if (data.schema().columns[c].kind == ColumnKind::numeric) {
      for (auto r : cell) cell_cols[c].numeric.push_back(data.numeric(c)[r]);
    } else {
      for (auto r : cell) cell_cols[c].categorical.push_back(data.categorical(c)[r]);
    }
  }
  std::vector<std::int64_t> cell_ids;
  for (auto r : cell) cell_ids.push_back(data.row_ids()[r]);
  Dataset cell_data(data.schema(), cell_ids, std::move(cell_cols));

  std::vector<std::vector<std::size_t>> neighbors(cell.size());
  bool metric_ok = true;
  try {
    FeatureSpace space(cell_data, warnings);
    for (std::size_t i = 0; i < cell.size(); ++i) neighbors[i] = space.nearest_to_row(i, k);
  } catch (const Error& e) {
    if (e.code() != Errc::degenerate_feature) throw;
    metric_ok = false;
  }
  if (!metric_ok) {
    for (std::size_t i = 0; i < cell.size(); ++i) {
      std::vector<std::size_t> order;
      for (std::size_t j = 0; j < cell.size(); ++j)
        if (j != i) order.push_back(j);
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return cell_ids[a] < cell_ids[b]; });
      order.resize(k);
      neighbors[i] = std::move(order);
    }
  }

  std::int64_t next_id = 0;
  for (auto id : data.row_ids()) next_id = std::max(next_id, id + 1);

  std::vector<Column> cols(data.n_cols());
  for (std::size_t c = 0; c < data.n_cols(); ++c) cols[c] = data.column(c);
  std::vector<std::int64_t> row_ids = data.row_ids();
  std::vector<std::uint8_t> flags = data.synthetic_flags();
  flags.resize(data.n_rows(), 0);

  for (std::size_t j = 0; j < count; ++j) {
    Rng rng(seed, j);
    const std::size_t bi = static_cast<std::size_t>(rng.next_below(cell.size()));
    const std::size_t ni = neighbors[bi][rng.next_below(neighbors[bi].size())];
    const double u = rng.next_double();
    const std::size_t base = cell[bi], nb = cell[ni];
    for (std::size_t c = 0; c < data.n_cols(); ++c) {
      if (data.schema().columns[c].kind == ColumnKind::numeric) {
        const double b = data.numeric(c)[base], n = data.numeric(c)[nb];
        cols[c].numeric.push_back(b + u * (n - b));
      } else {
        cols[c].categorical.push_back(data.categorical(c)[base]);
      }
    }
    row_ids.push_back(next_id++);
    flags.push_back(1);
  }
  return Dataset(data.schema(), std::move(row_ids), std::move(cols), std::move(flags));
}

}  // namespace fairkit
