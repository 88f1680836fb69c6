#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairkit/dataset.hpp"
#include "fairkit/error.hpp"

namespace fairkit {

// Group-fairness numbers for one outcome vector. ratio is
// unprivileged_rate / privileged_rate; +infinity when the privileged rate is
// zero and the unprivileged rate is not, 1.0 when both rates are zero.
struct GroupRates {
  double privileged_rate = 0.0;
  double unprivileged_rate = 0.0;
  std::size_t n_privileged = 0;
  std::size_t n_unprivileged = 0;
  double ratio = 1.0;
  double parity_difference = 0.0;  // unprivileged_rate - privileged_rate
};

// outcomes: 1 = favorable. groups: 1 = privileged. Throws EmptyGroup naming
// the missing group.
GroupRates disparate_impact(const std::vector<int>& outcomes, const std::vector<int>& groups);

// Individual-fairness proxy: 1 - mean_i |v_i - mean_{j in kNN(i)} v_j| with
// neighborhoods taken in the dataset's feature space. Distance is Euclidean
// over standardized numeric columns plus Hamming over categorical columns;
// zero-variance numeric columns are excluded with a warning, and ties are
// broken by lower row_id.
double consistency(const Dataset& data, const std::vector<double>& values, std::size_t k,
                   WarningLog* warnings = nullptr);

double accuracy(const std::vector<int>& predictions, const std::vector<int>& truth);

// kNN over the dataset's feature columns; exposed for the audit module so
// neighborhoods there use the exact same metric and tie-breaking.
struct FeatureSpace {
  explicit FeatureSpace(const Dataset& data, WarningLog* warnings = nullptr);
  double distance(const Record& a, const Record& b) const;
  // k nearest row indices to the probe record, nearest first.
  std::vector<std::size_t> nearest(const Record& probe, std::size_t k) const;
  // k nearest row indices to row i, excluding i itself.
  std::vector<std::size_t> nearest_to_row(std::size_t row, std::size_t k) const;

 private:
  const Dataset& data_;
  std::vector<std::size_t> numeric_cols_;  // non-degenerate only
  std::vector<std::size_t> categorical_cols_;
  std::vector<double> means_;
  std::vector<double> stds_;
  std::vector<std::size_t> rank_;  // row index -> order by (distance, row_id)
};

struct FairnessReport {
  double disparate_impact_ratio = 1.0;
  double statistical_parity_difference = 0.0;
  std::optional<double> accuracy;  // absent for raw datasets
  double consistency = 1.0;
  double privileged_positive_rate = 0.0;
  double unprivileged_positive_rate = 0.0;
  std::size_t n_privileged = 0;
  std::size_t n_unprivileged = 0;

  std::string to_json() const;
  std::string to_csv() const;  // flat, one header line + one value line
};

// Metrics of the dataset's own labels.
FairnessReport dataset_report(const Dataset& data, std::size_t k = 5,
                              WarningLog* warnings = nullptr);
// Metrics of model outputs against the dataset's labels. decisions drive the
// group metrics and accuracy; scores drive consistency.
FairnessReport prediction_report(const Dataset& data, const std::vector<double>& scores,
                                 const std::vector<int>& decisions, std::size_t k = 5,
                                 WarningLog* warnings = nullptr);

}  // namespace fairkit
