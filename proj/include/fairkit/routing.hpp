#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairkit/dataset.hpp"
#include "fairkit/model.hpp"

namespace fairkit {

// Simulated human decider: either group-conditional favorable rates or
// agreement with the recorded label up to an error rate.
struct HumanModel {
  enum class Kind { group_rates, truth_agreement };
  Kind kind = Kind::group_rates;
  double rate_privileged = 0.5;
  double rate_unprivileged = 0.5;
  double error_rate = 0.0;  // truth_agreement: probability of deciding against the label
};

struct RoutingConfig {
  double consent_rate = 1.0;
  double ai_fraction_cap = 1.0;  // AI may decide at most floor(cap * n) matters
  HumanModel human;
  std::uint64_t seed = 0;
};

enum class DecidedBy { ai, human };

struct MatterOutcome {
  std::int64_t row_id;
  bool consented = false;
  bool routed_to_ai = false;
  std::optional<int> ai_decision;
  int final_decision = 0;
  bool re_evaluated = false;  // AI-negative, blindly re-queued to a human
  DecidedBy final_by = DecidedBy::human;
};

struct RoutingResult {
  std::vector<MatterOutcome> matters;  // dataset order
  // Serialized human-queue records in decision order. These records are what
  // a human decider sees; blindness demands their structure carries no trace
  // of any prior AI routing.
  std::vector<std::string> human_queue_records;
  std::vector<std::uint8_t> record_was_reinserted;  // parallel to the records

  std::size_t n = 0;
  std::size_t non_consenting = 0;
  std::size_t ai_routed = 0;
  std::size_t ai_positive = 0;   // AI-final count
  std::size_t ai_negative = 0;   // re-evaluation load
  std::size_t consent_overflow = 0;  // consented but over the AI cap
  std::size_t human_workload = 0;
  double privileged_favorable_rate = 0.0;
  double unprivileged_favorable_rate = 0.0;

  std::string to_json() const;
};

// Consent is drawn per matter; the first floor(cap*n) consenting matters go
// to the AI. AI-positive outcomes are final, AI-negative matters are inserted
// at a seed-determined position into the human queue with no routing metadata
// attached, and the human model decides the queue.
RoutingResult simulate(const Dataset& matters, const Model& model, const RoutingConfig& config);

// With a zero cap the model is never consulted.
RoutingResult simulate_without_model(const Dataset& matters, const RoutingConfig& config);

struct BlindnessReport {
  bool passed = true;
  std::vector<std::string> offending_fields;
  std::string to_json() const;
};

// Structural check: the set of JSON fields must be identical between
// re-inserted and never-routed human-queue records.
BlindnessReport verify_blindness(const RoutingResult& result);

}  // namespace fairkit
