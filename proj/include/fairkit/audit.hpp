#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairkit/dataset.hpp"
#include "fairkit/trainer.hpp"

namespace fairkit {

// How a repair changed the precedent neighborhood of one probe case.
// Neighbors are found in the ORIGINAL data only; the repaired dataset is
// consulted solely to diff labels and features per neighbor.
struct AuditFinding {
  std::int64_t probe_row_id = -1;  // -1 for free-standing probe records
  struct Neighbor {
    std::int64_t row_id;
    std::string original_label;
    std::string repaired_label;
    bool flipped;
    int feature_distortion;  // changed feature coordinates
  };
  std::vector<Neighbor> neighbors;
  double flip_rate = 0.0;  // flipped count / k
  int decision_original = 0;  // probe decision under model trained on original
  int decision_repaired = 0;  // ... and on repaired data, same seed and config
  bool decision_changed = false;

  std::string to_json() const;
};

struct AuditSummary {
  std::size_t n_probes = 0;
  double mean_flip_rate = 0.0;
  double decision_change_rate = 0.0;

  std::string to_json() const;
};

AuditFinding audit_probe(const Dataset& original, const Dataset& repaired, const Record& probe,
                         std::size_t k, const TrainerSpec& trainer);

struct AuditSweepResult {
  std::vector<AuditFinding> findings;
  AuditSummary summary;
};

// Elementwise audit_probe with the two models trained once and reused.
AuditSweepResult audit_sweep(const Dataset& original, const Dataset& repaired,
                             const std::vector<Record>& probes, std::size_t k,
                             const TrainerSpec& trainer);

}  // namespace fairkit
