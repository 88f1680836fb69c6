#include "fairkit/routing.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fairkit/error.hpp"
#include "fairkit/rng.hpp"
#include "vendor/json.hpp"

namespace fairkit {

namespace {

void validate(const RoutingConfig& config) {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
      throw Error(Errc::invalid_config, std::string(name) + " must be in [0, 1]");
  };
  prob(config.consent_rate, "consent_rate");
  prob(config.ai_fraction_cap, "ai_fraction_cap");
  prob(config.human.rate_privileged, "rate_privileged");
  prob(config.human.rate_unprivileged, "rate_unprivileged");
  prob(config.human.error_rate, "error_rate");
}

// What a human decider sees for one matter: the case fields and nothing about
// how the matter reached the queue.
std::string queue_record(const Dataset& matters, std::size_t row) {
  nlohmann::json j;
  j["row_id"] = matters.row_ids()[row];
  nlohmann::json fields = nlohmann::json::object();
  const auto& schema = matters.schema();
  for (std::size_t c = 0; c < matters.n_cols(); ++c) {
    if (schema.columns[c].kind == ColumnKind::numeric)
      fields[schema.columns[c].name] = matters.numeric(c)[row];
    else
      fields[schema.columns[c].name] = matters.categorical(c)[row];
  }
  j["fields"] = std::move(fields);
  return j.dump();
}

RoutingResult run(const Dataset& matters, const Model* model, const RoutingConfig& config) {
  validate(config);
  const std::size_t n = matters.n_rows();
  if (n == 0) throw Error(Errc::empty_input, "no matters to route");

  std::vector<double> scores;
  std::size_t cap = 0;
  if (model) {
    cap = static_cast<std::size_t>(std::floor(config.ai_fraction_cap * static_cast<double>(n)));
    if (cap > 0) scores = model->score(matters);
  }

  RoutingResult result;
  result.n = n;
  result.matters.resize(n);
  const auto groups = matters.groups01();
  const auto labels = matters.labels01();

  Rng rng(config.seed);

  // Arrival pass: consent, AI routing up to the cap, queue assembly.
  std::vector<std::size_t> queue;  // row indices, human-decision order
  std::vector<std::uint8_t> reinserted;
  std::vector<std::size_t> ai_negative_rows;
  for (std::size_t i = 0; i < n; ++i) {
    auto& m = result.matters[i];
    m.row_id = matters.row_ids()[i];
    m.consented = rng.bernoulli(config.consent_rate);
    if (!m.consented) {
      ++result.non_consenting;
      queue.push_back(i);
      reinserted.push_back(0);
      continue;
    }
    if (result.ai_routed < cap) {
      m.routed_to_ai = true;
      ++result.ai_routed;
      const int decision = scores[i] >= 0.5 ? 1 : 0;
      m.ai_decision = decision;
      if (decision == 1) {
        m.final_decision = 1;
        m.final_by = DecidedBy::ai;
        ++result.ai_positive;
      } else {
        ++result.ai_negative;
        ai_negative_rows.push_back(i);
      }
    } else {
      ++result.consent_overflow;
      queue.push_back(i);
      reinserted.push_back(0);
    }
  }

  // Blind re-insertion of AI-negative matters, in AI-decision order.
  for (std::size_t i : ai_negative_rows) {
    const std::size_t pos = static_cast<std::size_t>(rng.next_below(queue.size() + 1));
    queue.insert(queue.begin() + static_cast<std::ptrdiff_t>(pos), i);
    reinserted.insert(reinserted.begin() + static_cast<std::ptrdiff_t>(pos), 1);
    result.matters[i].re_evaluated = true;
  }

  // Human pass over the assembled queue.
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const std::size_t i = queue[q];
    auto& m = result.matters[i];
    int decision;
    if (config.human.kind == HumanModel::Kind::group_rates) {
      const double rate =
          groups[i] ? config.human.rate_privileged : config.human.rate_unprivileged;
      decision = rng.bernoulli(rate) ? 1 : 0;
    } else {
      const bool agree = !rng.bernoulli(config.human.error_rate);
      decision = agree ? labels[i] : 1 - labels[i];
    }
    m.final_decision = decision;
    m.final_by = DecidedBy::human;
    result.human_queue_records.push_back(queue_record(matters, i));
    result.record_was_reinserted.push_back(reinserted[q]);
  }
  result.human_workload = queue.size();

  std::size_t fav_priv = 0, n_priv = 0, fav_unpriv = 0, n_unpriv = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (groups[i]) {
      ++n_priv;
      fav_priv += result.matters[i].final_decision;
    } else {
      ++n_unpriv;
      fav_unpriv += result.matters[i].final_decision;
    }
  }
  result.privileged_favorable_rate =
      n_priv ? static_cast<double>(fav_priv) / static_cast<double>(n_priv) : 0.0;
  result.unprivileged_favorable_rate =
      n_unpriv ? static_cast<double>(fav_unpriv) / static_cast<double>(n_unpriv) : 0.0;
  return result;
}

}  // namespace

RoutingResult simulate(const Dataset& matters, const Model& model, const RoutingConfig& config) {
  return run(matters, &model, config);
}

RoutingResult simulate_without_model(const Dataset& matters, const RoutingConfig& config) {
  return run(matters, nullptr, config);
}

std::string RoutingResult::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["non_consenting"] = non_consenting;
  j["ai_routed"] = ai_routed;
  j["ai_positive"] = ai_positive;
  j["ai_negative"] = ai_negative;
  j["consent_overflow"] = consent_overflow;
  j["human_workload"] = human_workload;
  j["privileged_favorable_rate"] = privileged_favorable_rate;
  j["unprivileged_favorable_rate"] = unprivileged_favorable_rate;
  return j.dump(2);
}

std::string BlindnessReport::to_json() const {
  nlohmann::json j;
  j["passed"] = passed;
  j["offending_fields"] = offending_fields;
  return j.dump(2);
}

BlindnessReport verify_blindness(const RoutingResult& result) {
  std::set<std::string> fields_reinserted, fields_fresh;
  auto collect = [](const std::string& text, std::set<std::string>* out) {
    const auto j = nlohmann::json::parse(text);
    for (auto it = j.begin(); it != j.end(); ++it) {
      out->insert(it.key());
      if (it->is_object())
        for (auto inner = it->begin(); inner != it->end(); ++inner)
          out->insert(it.key() + "." + inner.key());
    }
  };
  for (std::size_t q = 0; q < result.human_queue_records.size(); ++q) {
    const bool re = q < result.record_was_reinserted.size() && result.record_was_reinserted[q];
    collect(result.human_queue_records[q], re ? &fields_reinserted : &fields_fresh);
  }
  BlindnessReport report;
  if (fields_reinserted.empty() || fields_fresh.empty()) return report;  // vacuous
  std::vector<std::string> diff;
  std::set_symmetric_difference(fields_reinserted.begin(), fields_reinserted.end(),
                                fields_fresh.begin(), fields_fresh.end(),
                                std::back_inserter(diff));
  if (!diff.empty()) {
    report.passed = false;
    report.offending_fields = std::move(diff);
  }
  return report;
}

}  // namespace fairkit
