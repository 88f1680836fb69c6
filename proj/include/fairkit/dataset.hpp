#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "fairkit/error.hpp"
#include "fairkit/schema.hpp"

namespace fairkit {

using CellValue = std::variant<double, std::string>;
using Record = std::vector<CellValue>;

// One column of storage; which vector is active depends on the column kind.
struct Column {
  std::vector<double> numeric;
  std::vector<std::string> categorical;
};

// Immutable-by-convention tabular data. Operations take a const Dataset and
// return a new one; row_ids survive every repair so original and repaired
// records can be diffed.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Schema schema, std::vector<std::int64_t> row_ids, std::vector<Column> columns,
          std::vector<std::uint8_t> synthetic_flags = {});

  const Schema& schema() const { return schema_; }
  std::size_t n_rows() const { return row_ids_.size(); }
  std::size_t n_cols() const { return schema_.columns.size(); }
  const std::vector<std::int64_t>& row_ids() const { return row_ids_; }

  const Column& column(std::size_t col) const { return columns_[col]; }
  const std::vector<double>& numeric(std::size_t col) const;
  const std::vector<std::string>& categorical(std::size_t col) const;

  // Mutable access for construction of repaired copies.
  Column& mutable_column(std::size_t col) { return columns_[col]; }

  Record record(std::size_t row) const;
  std::string value_as_string(std::size_t row, std::size_t col) const;

  // 1 where the label equals schema().favorable_label.
  std::vector<int> labels01() const;
  // 1 where the protected value equals schema().privileged_value.
  std::vector<int> groups01() const;

  // The literal stored label / protected strings per row.
  const std::vector<std::string>& label_values() const;
  const std::vector<std::string>& protected_values() const;

  // Rows added by augmentation. Empty when no provenance is tracked.
  const std::vector<std::uint8_t>& synthetic_flags() const { return synthetic_flags_; }
  bool has_synthetic_flags() const { return !synthetic_flags_.empty(); }
  void set_synthetic_flags(std::vector<std::uint8_t> flags);

  // Distinct observed values of a categorical column, sorted.
  std::vector<std::string> observed_values(std::size_t col) const;

  // Copy without the rows whose synthetic flag is set.
  Dataset strip_synthetic() const;

 private:
  Schema schema_;
  std::vector<std::int64_t> row_ids_;
  std::vector<Column> columns_;
  std::vector<std::uint8_t> synthetic_flags_;  // empty or n_rows entries
};

// Equal-width binning of numeric columns so that operations needing finite
// domains can run. Binned columns become categorical with values "b0".."bK".
struct BinningInfo {
  // column name -> bin edges (size bins+1); empty when nothing was binned
  std::map<std::string, std::vector<double>> edges;
};

Dataset bin_numeric_columns(const Dataset& data, int bins, BinningInfo* info = nullptr);

bool datasets_equal(const Dataset& a, const Dataset& b);

}  // namespace fairkit
