#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairkit/dataset.hpp"
#include "fairkit/encoding.hpp"
#include "fairkit/model.hpp"

namespace fairkit {

struct AdversarialConfig {
  std::size_t hidden = 8;      // shared layer width, tanh activation
  double lambda = 1.0;         // adversary weight in the main objective
  double learning_rate = 0.5;
  std::size_t epochs = 300;    // one adversary step + one main step per epoch
  std::uint64_t seed = 0;
};

// Two heads over one shared tanh hidden layer: the predictor head scores the
// outcome, the adversary head tries to recover the protected value from the
// same representation. Each epoch alternates (i) an adversary step minimizing
// its own NLL with the shared layer frozen and (ii) a main step minimizing
// NLL_predictor - lambda * NLL_adversary over the shared layer and predictor
// head, which pushes the representation toward carrying nothing the adversary
// can use.
class AdversarialModel : public Model {
 public:
  static AdversarialModel fit(const Dataset& data, const AdversarialConfig& config);

  std::vector<double> score(const Dataset& data, WarningLog* warnings = nullptr) const override;
  // Adversary head's probability that each row is privileged.
  std::vector<double> adversary_score(const Dataset& data, WarningLog* warnings = nullptr) const;
  std::string to_json() const override;
  const char* kind() const override { return "adversarial"; }

  const std::vector<double>& loss_history() const { return loss_history_; }
  const AdversarialConfig& config() const { return config_; }

 private:
  AdversarialConfig config_;
  FeatureEncoder encoder_;
  std::size_t input_dim_ = 0;
  // Parameters: shared W1 (hidden x input) + b1, predictor wA + bA,
  // adversary wB + bB.
  std::vector<double> w1_, b1_, wa_, wb_;
  double ba_ = 0.0, bb_ = 0.0;
  std::vector<double> loss_history_;  // main objective per epoch

  friend class AdversarialObjective;
};

// Main-step objective NLL_A - lambda * NLL_B as a function of the packed
// main parameters [W1, b1, wA, bA] with the adversary head held fixed.
// Exposed for finite-difference verification of the analytic gradient.
class AdversarialObjective {
 public:
  AdversarialObjective(const Dataset& data, const AdversarialConfig& config);

  std::size_t main_dim() const;
  // Initial packed main parameters and the fixed adversary head, exactly as
  // fit() would initialize them from the config seed.
  std::vector<double> initial_main_params() const;
  std::vector<double> initial_adversary() const;  // [wB, bB]

  double main_value(std::span<const double> main_params,
                    std::span<const double> adversary) const;
  std::vector<double> main_gradient(std::span<const double> main_params,
                                    std::span<const double> adversary) const;
  double adversary_value(std::span<const double> main_params,
                         std::span<const double> adversary) const;
  std::vector<double> adversary_gradient(std::span<const double> main_params,
                                         std::span<const double> adversary) const;

 private:
  AdversarialConfig config_;
  FeatureEncoder encoder_;
  std::vector<double> matrix_;  // n x input_dim
  std::vector<int> labels_;
  std::vector<int> groups_;
  std::size_t n_ = 0;
  std::size_t input_dim_ = 0;

  friend class AdversarialModel;
};

}  // namespace fairkit
