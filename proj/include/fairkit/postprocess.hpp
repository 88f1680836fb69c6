#pragma once

#include <vector>

#include "fairkit/error.hpp"

namespace fairkit {

struct Decisions {
  std::vector<int> decisions;           // 1 = favorable
  std::vector<std::uint8_t> intervened; // 1 where the rule changed the default
};

struct RejectOptionConfig {
  double theta = 0.1;  // critical-region half-width in [0, 0.5]
  // boundary fixed at 0.5
};

// Inside the critical region |score - 0.5| < theta the unprivileged row gets
// the favorable outcome and the privileged row the unfavorable one; outside
// it the plain threshold applies. Scores exactly at the region edge are
// outside it.
Decisions reject_option(const std::vector<double>& scores, const std::vector<int>& groups,
                        const RejectOptionConfig& config);

// Unanimous classifier committees decide; on any disagreement the
// unprivileged row gets the favorable outcome and the privileged row the
// unfavorable one.
Decisions ensemble_disagreement(const std::vector<std::vector<int>>& decision_sets,
                                const std::vector<int>& groups);

}  // namespace fairkit
