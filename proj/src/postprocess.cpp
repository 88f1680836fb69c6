#include "fairkit/postprocess.hpp"

#include <cmath>

namespace fairkit {

Decisions reject_option(const std::vector<double>& scores, const std::vector<int>& groups,
                        const RejectOptionConfig& config) {
  if (scores.size() != groups.size())
    throw Error(Errc::length_mismatch, "scores and groups differ in length");
  if (!(config.theta >= 0.0 && config.theta <= 0.5))
    throw Error(Errc::invalid_config, "theta must be in [0, 0.5]");
  Decisions out;
  out.decisions.resize(scores.size());
  out.intervened.resize(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int plain = scores[i] >= 0.5 ? 1 : 0;
    if (std::abs(scores[i] - 0.5) < config.theta) {
      const int corrected = groups[i] ? 0 : 1;
      out.decisions[i] = corrected;
      out.intervened[i] = corrected != plain ? 1 : 0;
    } else {
      out.decisions[i] = plain;
      out.intervened[i] = 0;
    }
  }
  return out;
}

Decisions ensemble_disagreement(const std::vector<std::vector<int>>& decision_sets,
                                const std::vector<int>& groups) {
  if (decision_sets.size() < 2)
    throw Error(Errc::fewer_than_two_classifiers,
                "ensemble needs at least 2 classifiers, got " +
                    std::to_string(decision_sets.size()));
  for (const auto& set : decision_sets)
    if (set.size() != groups.size())
      throw Error(Errc::length_mismatch, "classifier decisions and groups differ in length");
  Decisions out;
  out.decisions.resize(groups.size());
  out.intervened.resize(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const int first = decision_sets[0][i] ? 1 : 0;
    bool unanimous = true;
    for (const auto& set : decision_sets)
      if ((set[i] ? 1 : 0) != first) {
        unanimous = false;
        break;
      }
    if (unanimous) {
      out.decisions[i] = first;
      out.intervened[i] = 0;
    } else {
      out.decisions[i] = groups[i] ? 0 : 1;
      out.intervened[i] = 1;
    }
  }
  return out;
}

}  // namespace fairkit
