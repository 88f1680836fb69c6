#include "fairkit/massage.hpp"

#include <algorithm>
#include <cmath>

#include "fairkit/naive_bayes.hpp"
#include "vendor/json.hpp"

namespace fairkit {

std::string MassagePlan::to_json() const {
  nlohmann::json j;
  j["m"] = m;
  j["promotions"] = promotions;
  j["demotions"] = demotions;
  return j.dump(2);
}

std::vector<double> rank_samples(const Dataset& data) {
  NaiveBayesModel ranker = NaiveBayesModel::fit(data);
  return ranker.score(data);
}

namespace {

struct GroupCounts {
  std::size_t n_priv = 0, n_unpriv = 0;
  std::size_t pos_priv = 0, pos_unpriv = 0;
};

GroupCounts count_groups(const Dataset& data) {
  const auto labels = data.labels01();
  const auto groups = data.groups01();
  GroupCounts gc;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (groups[i]) {
      ++gc.n_priv;
      gc.pos_priv += labels[i] ? 1 : 0;
    } else {
      ++gc.n_unpriv;
      gc.pos_unpriv += labels[i] ? 1 : 0;
    }
  }
  if (gc.n_priv == 0) throw Error(Errc::empty_group, "privileged group is empty");
  if (gc.n_unpriv == 0) throw Error(Errc::empty_group, "unprivileged group is empty");
  return gc;
}

std::size_t unclamped_m(const GroupCounts& gc) {
  const double num = static_cast<double>(gc.pos_priv) * static_cast<double>(gc.n_unpriv) -
                     static_cast<double>(gc.pos_unpriv) * static_cast<double>(gc.n_priv);
  if (num <= 0) return 0;
  const double denom = static_cast<double>(gc.n_priv + gc.n_unpriv);
  return static_cast<std::size_t>(std::ceil(num / denom));
}

std::size_t clamp_m(std::size_t m, const GroupCounts& gc, WarningLog* warnings) {
  const std::size_t promotable = gc.n_unpriv - gc.pos_unpriv;
  const std::size_t demotable = gc.pos_priv;
  const std::size_t avail = std::min(promotable, demotable);
  if (m > avail) {
    warn(warnings, "massage needs " + std::to_string(m) + " flips per list but only " +
                       std::to_string(avail) + " candidates exist; clamped");
    return avail;
  }
  return m;
}

}  // namespace

std::size_t compute_m(const Dataset& data, WarningLog* warnings) {
  const GroupCounts gc = count_groups(data);
  return clamp_m(unclamped_m(gc), gc, warnings);
}

MassagePlan build_plan(const Dataset& data, const std::vector<double>& scores,
                       WarningLog* warnings) {
  if (scores.size() != data.n_rows())
    throw Error(Errc::length_mismatch, "score count does not match rows");
  const GroupCounts gc = count_groups(data);
  const std::size_t m = clamp_m(unclamped_m(gc), gc, warnings);

  const auto labels = data.labels01();
  const auto groups = data.groups01();
  const auto& ids = data.row_ids();
  std::vector<std::size_t> promotable, demotable;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!groups[i] && !labels[i]) promotable.push_back(i);
    if (groups[i] && labels[i]) demotable.push_back(i);
  }
  // Promotions: highest score first; demotions: lowest score first. Ties go to
  // the lower row_id in both lists.
  std::sort(promotable.begin(), promotable.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return ids[a] < ids[b];
  });
  std::sort(demotable.begin(), demotable.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] < scores[b];
    return ids[a] < ids[b];
  });

  MassagePlan plan;
  plan.m = m;
  plan.scores = scores;
  for (std::size_t i = 0; i < m; ++i) {
    plan.promotions.push_back(ids[promotable[i]]);
    plan.demotions.push_back(ids[demotable[i]]);
  }
  return plan;
}

MassageResult massage(const Dataset& data, WarningLog* warnings) {
  MassagePlan plan = build_plan(data, rank_samples(data), warnings);

  const auto& schema = data.schema();
  const std::size_t label_col = schema.label_index();
  // The unfavorable value rows are promoted from. With a binary label this is
  // the single other observed value; favorable-only datasets cannot reach here
  // (the ranker already rejects single-class data).
  std::string unfavorable;
  for (const auto& v : data.observed_values(label_col))
    if (v != schema.favorable_label) unfavorable = v;

  std::vector<Column> cols(data.n_cols());
  for (std::size_t c = 0; c < data.n_cols(); ++c) cols[c] = data.column(c);
  auto& labels = cols[label_col].categorical;
  const auto& ids = data.row_ids();
  auto flip = [&](std::int64_t id, const std::string& to) {
    auto it = std::find(ids.begin(), ids.end(), id);
    labels[static_cast<std::size_t>(it - ids.begin())] = to;
  };
  for (auto id : plan.promotions) flip(id, schema.favorable_label);
  for (auto id : plan.demotions) flip(id, unfavorable);

  return MassageResult{
      Dataset(schema, ids, std::move(cols), data.synthetic_flags()),
      std::move(plan)};
}

}  // namespace fairkit
