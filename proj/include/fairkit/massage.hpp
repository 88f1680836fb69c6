#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairkit/dataset.hpp"
#include "fairkit/error.hpp"

namespace fairkit {

// Audit trail of a label-massaging repair: which rows get promoted
// (unprivileged, unfavorable -> favorable, taken in descending score order)
// and which get demoted (privileged, favorable -> unfavorable, ascending
// score order). Ties in score break toward the lower row_id.
struct MassagePlan {
  std::size_t m = 0;
  std::vector<std::int64_t> promotions;  // row_ids, |promotions| == m
  std::vector<std::int64_t> demotions;   // row_ids, |demotions| == m
  std::vector<double> scores;            // per-row favorable-class posterior

  std::string to_json() const;
};

// Per-row favorable-class posterior from a naive Bayes ranker (Laplace
// alpha=1) fit on the feature columns only; the protected column is excluded
// so the ranking cannot be driven by the attribute being corrected.
std::vector<double> rank_samples(const Dataset& data);

// Least number of promotion/demotion pairs that lifts the unprivileged
// favorable rate to at least the privileged one:
// ceil((pos_priv*n_unpriv - pos_unpriv*n_priv) / (n_priv + n_unpriv)),
// clamped at 0 and at the number of available candidates (with a warning).
std::size_t compute_m(const Dataset& data, WarningLog* warnings = nullptr);

// Plan construction from explicit scores; massage() uses rank_samples but the
// plan depends on the score ranking only.
MassagePlan build_plan(const Dataset& data, const std::vector<double>& scores,
                       WarningLog* warnings = nullptr);

struct MassageResult {
  Dataset repaired;
  MassagePlan plan;
};

// Flips exactly plan.m labels in each list; every other value and all row_ids
// are untouched.
MassageResult massage(const Dataset& data, WarningLog* warnings = nullptr);

}  // namespace fairkit
