#include "fairkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "vendor/json.hpp"

namespace fairkit {

GroupRates disparate_impact(const std::vector<int>& outcomes, const std::vector<int>& groups) {
  if (outcomes.size() != groups.size())
    throw Error(Errc::length_mismatch, "outcomes and groups differ in length");
  if (outcomes.empty()) throw Error(Errc::empty_input, "no rows");
  GroupRates r;
  std::size_t pos_priv = 0, pos_unpriv = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (groups[i]) {
      ++r.n_privileged;
      pos_priv += outcomes[i] ? 1 : 0;
    } else {
      ++r.n_unprivileged;
      pos_unpriv += outcomes[i] ? 1 : 0;
    }
  }
  if (r.n_privileged == 0) throw Error(Errc::empty_group, "privileged group is empty");
  if (r.n_unprivileged == 0) throw Error(Errc::empty_group, "unprivileged group is empty");
  r.privileged_rate = static_cast<double>(pos_priv) / static_cast<double>(r.n_privileged);
  r.unprivileged_rate = static_cast<double>(pos_unpriv) / static_cast<double>(r.n_unprivileged);
  r.parity_difference = r.unprivileged_rate - r.privileged_rate;
  if (r.privileged_rate > 0.0)
    r.ratio = r.unprivileged_rate / r.privileged_rate;
  else if (r.unprivileged_rate > 0.0)
    r.ratio = std::numeric_limits<double>::infinity();
  else
    r.ratio = 1.0;
  return r;
}

double accuracy(const std::vector<int>& predictions, const std::vector<int>& truth) {
  if (predictions.size() != truth.size())
    throw Error(Errc::length_mismatch, "predictions and truth differ in length");
  if (predictions.empty()) throw Error(Errc::empty_input, "no rows");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    agree += (predictions[i] != 0) == (truth[i] != 0) ? 1 : 0;
  return static_cast<double>(agree) / static_cast<double>(predictions.size());
}

FeatureSpace::FeatureSpace(const Dataset& data, WarningLog* warnings) : data_(data) {
  std::size_t degenerate = 0, numeric_total = 0;
  for (std::size_t c : data.schema().feature_indices()) {
    if (data.schema().columns[c].kind == ColumnKind::categorical) {
      categorical_cols_.push_back(c);
      continue;
    }
    ++numeric_total;
    const auto& vals = data.numeric(c);
    double mean = std::accumulate(vals.begin(), vals.end(), 0.0) /
                  static_cast<double>(vals.size());
    double var = 0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= static_cast<double>(vals.size());
    if (var == 0.0) {
      ++degenerate;
      warn(warnings, "feature '" + data.schema().columns[c].name +
                         "' has zero variance; excluded from distances");
      continue;
    }
    numeric_cols_.push_back(c);
    means_.push_back(mean);
    stds_.push_back(std::sqrt(var));
  }
  if (numeric_cols_.empty() && categorical_cols_.empty()) {
    if (degenerate == numeric_total && numeric_total > 0)
      throw Error(Errc::degenerate_feature, "every feature column has zero variance");
    throw Error(Errc::empty_input, "dataset has no feature columns");
  }
}

double FeatureSpace::distance(const Record& a, const Record& b) const {
  double sq = 0;
  for (std::size_t i = 0; i < numeric_cols_.size(); ++i) {
    const std::size_t c = numeric_cols_[i];
    const double da = (std::get<double>(a[c]) - means_[i]) / stds_[i];
    const double db = (std::get<double>(b[c]) - means_[i]) / stds_[i];
    sq += (da - db) * (da - db);
  }
  double dist = std::sqrt(sq);
  for (std::size_t c : categorical_cols_)
    dist += std::get<std::string>(a[c]) == std::get<std::string>(b[c]) ? 0.0 : 1.0;
  return dist;
}

namespace {

std::vector<std::size_t> k_smallest(const std::vector<std::pair<double, std::int64_t>>& keyed,
                                    const std::vector<std::size_t>& candidates, std::size_t k) {
  std::vector<std::size_t> order = candidates;
  auto cmp = [&](std::size_t l, std::size_t r) {
    if (keyed[l].first != keyed[r].first) return keyed[l].first < keyed[r].first;
    return keyed[l].second < keyed[r].second;
  };
  if (k < order.size()) {
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      cmp);
    order.resize(k);
  } else {
    std::sort(order.begin(), order.end(), cmp);
  }
  return order;
}

}  // namespace

std::vector<std::size_t> FeatureSpace::nearest(const Record& probe, std::size_t k) const {
  if (k < 1) throw Error(Errc::invalid_config, "k must be at least 1");
  if (k > data_.n_rows())
    throw Error(Errc::k_too_large, "k = " + std::to_string(k) + " with only " +
                                       std::to_string(data_.n_rows()) + " rows");
  std::vector<std::pair<double, std::int64_t>> keyed(data_.n_rows());
  std::vector<std::size_t> all(data_.n_rows());
  for (std::size_t r = 0; r < data_.n_rows(); ++r) {
    keyed[r] = {distance(probe, data_.record(r)), data_.row_ids()[r]};
    all[r] = r;
  }
  return k_smallest(keyed, all, k);
}

std::vector<std::size_t> FeatureSpace::nearest_to_row(std::size_t row, std::size_t k) const {
  if (k < 1) throw Error(Errc::invalid_config, "k must be at least 1");
  if (k >= data_.n_rows())
    throw Error(Errc::k_too_large, "k = " + std::to_string(k) + " needs at least " +
                                       std::to_string(k + 1) + " rows");
  Record probe = data_.record(row);
  std::vector<std::pair<double, std::int64_t>> keyed(data_.n_rows());
  std::vector<std::size_t> candidates;
  candidates.reserve(data_.n_rows() - 1);
  for (std::size_t r = 0; r < data_.n_rows(); ++r) {
    if (r == row) continue;
    keyed[r] = {distance(probe, data_.record(r)), data_.row_ids()[r]};
    candidates.push_back(r);
  }
  return k_smallest(keyed, candidates, k);
}

double consistency(const Dataset& data, const std::vector<double>& values, std::size_t k,
                   WarningLog* warnings) {
  if (values.size() != data.n_rows())
    throw Error(Errc::length_mismatch, "value count does not match rows");
  if (k < 1) throw Error(Errc::invalid_config, "k must be at least 1");
  if (k >= data.n_rows())
    throw Error(Errc::k_too_large,
                "k = " + std::to_string(k) + " with only " + std::to_string(data.n_rows()) +
                    " rows");
  FeatureSpace space(data, warnings);
  double total = 0;
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    auto nb = space.nearest_to_row(i, k);
    double mean = 0;
    for (auto j : nb) mean += values[j];
    mean /= static_cast<double>(nb.size());
    total += std::abs(values[i] - mean);
  }
  return 1.0 - total / static_cast<double>(data.n_rows());
}

namespace {

nlohmann::json rate_json(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

std::string format_rate(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

FairnessReport build_report(const GroupRates& rates, std::optional<double> acc, double cons) {
  FairnessReport rep;
  rep.disparate_impact_ratio = rates.ratio;
  rep.statistical_parity_difference = rates.parity_difference;
  rep.accuracy = acc;
  rep.consistency = cons;
  rep.privileged_positive_rate = rates.privileged_rate;
  rep.unprivileged_positive_rate = rates.unprivileged_rate;
  rep.n_privileged = rates.n_privileged;
  rep.n_unprivileged = rates.n_unprivileged;
  return rep;
}

}  // namespace

std::string FairnessReport::to_json() const {
  nlohmann::json j;
  j["disparate_impact_ratio"] = rate_json(disparate_impact_ratio);
  j["statistical_parity_difference"] = statistical_parity_difference;
  if (accuracy) j["accuracy"] = *accuracy;
  j["consistency"] = consistency;
  j["privileged_positive_rate"] = privileged_positive_rate;
  j["unprivileged_positive_rate"] = unprivileged_positive_rate;
  j["n_privileged"] = n_privileged;
  j["n_unprivileged"] = n_unprivileged;
  return j.dump(2);
}

std::string FairnessReport::to_csv() const {
  std::ostringstream head, row;
  row.precision(17);
  head << "disparate_impact_ratio,statistical_parity_difference,";
  row << format_rate(disparate_impact_ratio) << ',' << statistical_parity_difference << ',';
  if (accuracy) {
    head << "accuracy,";
    row << *accuracy << ',';
  }
  head << "consistency,privileged_positive_rate,unprivileged_positive_rate,"
          "n_privileged,n_unprivileged";
  row << consistency << ',' << privileged_positive_rate << ',' << unprivileged_positive_rate
      << ',' << n_privileged << ',' << n_unprivileged;
  return head.str() + "\n" + row.str() + "\n";
}

FairnessReport dataset_report(const Dataset& data, std::size_t k, WarningLog* warnings) {
  auto labels = data.labels01();
  auto groups = data.groups01();
  GroupRates rates = disparate_impact(labels, groups);
  std::vector<double> values(labels.begin(), labels.end());
  double cons = consistency(data, values, k, warnings);
  return build_report(rates, std::nullopt, cons);
}

FairnessReport prediction_report(const Dataset& data, const std::vector<double>& scores,
                                 const std::vector<int>& decisions, std::size_t k,
                                 WarningLog* warnings) {
  if (scores.size() != data.n_rows() || decisions.size() != data.n_rows())
    throw Error(Errc::length_mismatch, "prediction count does not match rows");
  GroupRates rates = disparate_impact(decisions, data.groups01());
  double acc = accuracy(decisions, data.labels01());
  double cons = consistency(data, scores, k, warnings);
  return build_report(rates, acc, cons);
}

}  // namespace fairkit
