#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairkit/dataset.hpp"
#include "fairkit/model.hpp"

namespace fairkit {

// Categorical naive Bayes with Laplace smoothing. Numeric feature columns are
// equal-width binned first; the protected column is never a feature. Class
// priors are unsmoothed empirical frequencies, per-column likelihoods are
// (count + alpha) / (class_count + alpha * domain_size) with the domain taken
// over the whole training set.
class NaiveBayesModel : public Model {
 public:
  struct Config {
    double alpha = 1.0;
    int numeric_bins = 8;
  };

  static NaiveBayesModel fit(const Dataset& data, const Config& config);
  static NaiveBayesModel fit(const Dataset& data) { return fit(data, Config{}); }

  std::vector<double> score(const Dataset& data, WarningLog* warnings = nullptr) const override;
  std::string to_json() const override;
  const char* kind() const override { return "naive_bayes"; }

 private:
  Config config_;
  double prior_positive_ = 0.5;
  // Per feature column: domain values and smoothed log-likelihoods per class.
  struct FeatureTable {
    std::string column;
    std::vector<std::string> domain;
    std::vector<double> log_like_positive;  // per domain value
    std::vector<double> log_like_negative;
    double unseen_log_positive;  // smoothing mass for values outside the domain
    double unseen_log_negative;
  };
  std::vector<FeatureTable> tables_;
  BinningInfo binning_;
};

}  // namespace fairkit
