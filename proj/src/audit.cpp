#include "fairkit/audit.hpp"

#include <algorithm>

#include "fairkit/metrics.hpp"
#include "vendor/json.hpp"

namespace fairkit {

namespace {

Dataset records_to_dataset(const Schema& schema, const std::vector<Record>& records) {
  std::vector<std::int64_t> ids(records.size());
  std::vector<Column> cols(schema.columns.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    ids[r] = static_cast<std::int64_t>(r);
    if (records[r].size() != schema.columns.size())
      throw Error(Errc::length_mismatch, "probe record does not match the schema");
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      if (schema.columns[c].kind == ColumnKind::numeric)
        cols[c].numeric.push_back(std::get<double>(records[r][c]));
      else
        cols[c].categorical.push_back(std::get<std::string>(records[r][c]));
    }
  }
  return Dataset(schema, std::move(ids), std::move(cols));
}

std::int64_t matching_row_id(const Dataset& data, const Record& probe) {
  for (std::size_t r = 0; r < data.n_rows(); ++r)
    if (data.record(r) == probe) return data.row_ids()[r];
  return -1;
}

int feature_distortion(const Dataset& original, const Dataset& repaired, std::size_t row) {
  int changed = 0;
  for (std::size_t c : original.schema().feature_indices()) {
    if (original.schema().columns[c].kind == ColumnKind::numeric) {
      if (original.numeric(c)[row] != repaired.numeric(c)[row]) ++changed;
    } else {
      if (original.categorical(c)[row] != repaired.categorical(c)[row]) ++changed;
    }
  }
  return changed;
}

// Row-wise diffs need the original rows at the same positions in both
// datasets. Repairs that add rows (oversampling) append them after the
// originals, so a strict prefix match is the right precondition.
void require_same_rows(const Dataset& original, const Dataset& repaired) {
  const auto& a = original.row_ids();
  const auto& b = repaired.row_ids();
  if (a.size() > b.size() || !std::equal(a.begin(), a.end(), b.begin()))
    throw Error(Errc::row_id_mismatch,
                "repaired dataset does not contain the original rows in order");
}

AuditFinding build_finding(const Dataset& original, const Dataset& repaired,
                           const FeatureSpace& space, const Record& probe, std::size_t k,
                           int decision_original, int decision_repaired) {
  AuditFinding finding;
  finding.probe_row_id = matching_row_id(original, probe);
  for (std::size_t r : space.nearest(probe, k)) {
    AuditFinding::Neighbor nb;
    nb.row_id = original.row_ids()[r];
    nb.original_label = original.label_values()[r];
    nb.repaired_label = repaired.label_values()[r];
    nb.flipped = nb.original_label != nb.repaired_label;
    nb.feature_distortion = feature_distortion(original, repaired, r);
    finding.neighbors.push_back(std::move(nb));
  }
  std::size_t flips = 0;
  for (const auto& nb : finding.neighbors) flips += nb.flipped ? 1 : 0;
  finding.flip_rate =
      finding.neighbors.empty()
          ? 0.0
          : static_cast<double>(flips) / static_cast<double>(finding.neighbors.size());
  finding.decision_original = decision_original;
  finding.decision_repaired = decision_repaired;
  finding.decision_changed = decision_original != decision_repaired;
  return finding;
}

}  // namespace

std::string AuditFinding::to_json() const {
  nlohmann::json j;
  j["probe_row_id"] = probe_row_id;
  nlohmann::json nbs = nlohmann::json::array();
  for (const auto& nb : neighbors) {
    nlohmann::json n;
    n["row_id"] = nb.row_id;
    n["original_label"] = nb.original_label;
    n["repaired_label"] = nb.repaired_label;
    n["flipped"] = nb.flipped;
    n["feature_distortion"] = nb.feature_distortion;
    nbs.push_back(std::move(n));
  }
  j["neighbors"] = std::move(nbs);
  j["flip_rate"] = flip_rate;
  j["decision_original"] = decision_original;
  j["decision_repaired"] = decision_repaired;
  j["decision_changed"] = decision_changed;
  return j.dump();
}

std::string AuditSummary::to_json() const {
  nlohmann::json j;
  j["n_probes"] = n_probes;
  j["mean_flip_rate"] = mean_flip_rate;
  j["decision_change_rate"] = decision_change_rate;
  return j.dump(2);
}

AuditFinding audit_probe(const Dataset& original, const Dataset& repaired, const Record& probe,
                         std::size_t k, const TrainerSpec& trainer) {
  AuditSweepResult result = audit_sweep(original, repaired, {probe}, k, trainer);
  return result.findings[0];
}

AuditSweepResult audit_sweep(const Dataset& original, const Dataset& repaired,
                             const std::vector<Record>& probes, std::size_t k,
                             const TrainerSpec& trainer) {
  require_same_rows(original, repaired);
  AuditSweepResult result;
  if (probes.empty()) return result;

  FeatureSpace space(original);
  auto model_original = train_model(original, trainer);
  auto model_repaired = train_model(repaired, trainer);
  Dataset probe_data = records_to_dataset(original.schema(), probes);
  const auto scores_original = model_original->score(probe_data);
  const auto scores_repaired = model_repaired->score(probe_data);

  double flip_sum = 0;
  std::size_t changed = 0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    AuditFinding finding =
        build_finding(original, repaired, space, probes[i], k,
                      scores_original[i] >= 0.5 ? 1 : 0, scores_repaired[i] >= 0.5 ? 1 : 0);
    flip_sum += finding.flip_rate;
    changed += finding.decision_changed ? 1 : 0;
    result.findings.push_back(std::move(finding));
  }
  result.summary.n_probes = probes.size();
  result.summary.mean_flip_rate = flip_sum / static_cast<double>(probes.size());
  result.summary.decision_change_rate =
      static_cast<double>(changed) / static_cast<double>(probes.size());
  return result;
}

}  // namespace fairkit
