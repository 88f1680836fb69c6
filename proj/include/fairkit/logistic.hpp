#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairkit/dataset.hpp"
#include "fairkit/encoding.hpp"
#include "fairkit/model.hpp"

namespace fairkit {

struct LogisticConfig {
  double learning_rate = 0.5;
  std::size_t epochs = 300;
  double l2 = 1e-4;  // intercept excluded
  std::uint64_t seed = 0;
  // The protected column is excluded from features unless explicitly included
  // (used only to demonstrate disparate treatment).
  bool include_protected = false;
};

struct PrejudiceConfig {
  double eta = 1.0;
  double clamp_floor = 1e-9;  // probability floor inside the MI logs
};

// Mutual information between thresholded-outcome estimates and the protected
// attribute, with the joint estimated from mean predicted probabilities per
// group. probs are per-row favorable-class probabilities, groups 1=privileged.
double prejudice_index(const std::vector<double>& probs, const std::vector<int>& groups,
                       double clamp_floor = 1e-9);

// Linear scorer over the frozen feature encoding. Trained by full-batch
// gradient descent on mean NLL + l2; the learning rate halves whenever a step
// fails to decrease the loss, so the recorded loss history is non-increasing.
class LogisticModel : public Model {
 public:
  static LogisticModel fit(const Dataset& data, const LogisticConfig& config);
  // Adds eta * PI to the objective; the protected column feeds the penalty
  // estimate but never the features.
  static LogisticModel fit_prejudice(const Dataset& data, const LogisticConfig& config,
                                     const PrejudiceConfig& prejudice);

  std::vector<double> score(const Dataset& data, WarningLog* warnings = nullptr) const override;
  std::string to_json() const override;
  const char* kind() const override;

  const std::vector<double>& weights() const { return weights_; }  // intercept last
  const std::vector<double>& loss_history() const { return loss_history_; }
  const FeatureEncoder& encoder() const { return encoder_; }
  // PI of the trained model on its training data; 0 when eta was 0 free fit.
  double final_prejudice_index() const { return final_pi_; }

 private:
  static LogisticModel fit_impl(const Dataset& data, const LogisticConfig& config,
                                std::optional<PrejudiceConfig> prejudice);

  FeatureEncoder encoder_;
  std::vector<double> weights_;
  std::vector<double> loss_history_;
  LogisticConfig config_;
  std::optional<PrejudiceConfig> prejudice_;
  double final_pi_ = 0.0;

  friend class LogisticObjective;
};

// The exact objective and analytic gradient the trainer descends, exposed as
// a function of the weight vector for finite-difference verification.
class LogisticObjective {
 public:
  LogisticObjective(const Dataset& data, const LogisticConfig& config,
                    std::optional<PrejudiceConfig> prejudice = std::nullopt);

  std::size_t dim() const { return dim_; }  // encoded features + intercept
  double value(std::span<const double> weights) const;
  std::vector<double> gradient(std::span<const double> weights) const;
  std::vector<double> probabilities(std::span<const double> weights) const;

 private:
  FeatureEncoder encoder_;
  std::vector<double> matrix_;  // n x (dim-1)
  std::vector<int> labels_;
  std::vector<int> groups_;
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  double l2_ = 0.0;
  std::optional<PrejudiceConfig> prejudice_;

  friend class LogisticModel;
};

}  // namespace fairkit
