#pragma once

#include <string>
#include <vector>

#include "fairkit/dataset.hpp"
#include "fairkit/error.hpp"

namespace fairkit {

// Feature encoding frozen at fit time: one-hot for categorical columns
// (levels sorted, taken from the training data) and standardization for
// numeric columns. A categorical level unseen at fit time maps to an all-zero
// one-hot block with a warning.
class FeatureEncoder {
 public:
  FeatureEncoder() = default;
  explicit FeatureEncoder(const Dataset& train, bool include_protected = false);

  std::size_t dim() const { return dim_; }

  // Row-major n x dim matrix.
  std::vector<double> encode(const Dataset& data, WarningLog* warnings = nullptr) const;

  std::string to_json() const;

 private:
  struct ColumnCodec {
    std::string name;
    ColumnKind kind = ColumnKind::categorical;
    std::vector<std::string> levels;  // categorical
    double mean = 0.0;                // numeric
    double std = 1.0;                 // 1.0 when the column is constant
  };
  std::vector<ColumnCodec> codecs_;
  std::size_t dim_ = 0;
};

}  // namespace fairkit
