#include "fairkit/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "vendor/json.hpp"

namespace fairkit {

namespace {

std::string bin_value(double v, const std::vector<double>& edges) {
  const int bins = static_cast<int>(edges.size()) - 1;
  const double lo = edges.front(), hi = edges.back();
  int b = 0;
  if (hi > lo) {
    b = static_cast<int>((v - lo) / (hi - lo) * bins);
    b = std::clamp(b, 0, bins - 1);
  }
  return "b" + std::to_string(b);
}

}  // namespace

NaiveBayesModel NaiveBayesModel::fit(const Dataset& data, const Config& config) {
  if (data.n_rows() == 0) throw Error(Errc::empty_input, "cannot fit on an empty dataset");
  if (config.alpha <= 0.0) throw Error(Errc::invalid_config, "alpha must be positive");
  if (config.numeric_bins < 1) throw Error(Errc::invalid_config, "numeric_bins must be positive");

  NaiveBayesModel model;
  model.config_ = config;
  Dataset binned = bin_numeric_columns(data, config.numeric_bins, &model.binning_);

  const auto labels = binned.labels01();
  const std::size_t n = binned.n_rows();
  std::size_t n_pos = 0;
  for (int y : labels) n_pos += y ? 1 : 0;
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw Error(Errc::single_class_dataset, "training data contains a single label value");
  model.prior_positive_ = static_cast<double>(n_pos) / static_cast<double>(n);

  const double alpha = config.alpha;
  for (std::size_t c : binned.schema().feature_indices()) {
    FeatureTable table;
    table.column = binned.schema().columns[c].name;
    table.domain = binned.observed_values(c);
    const double V = static_cast<double>(table.domain.size());
    std::vector<std::int64_t> count_pos(table.domain.size(), 0);
    std::vector<std::int64_t> count_neg(table.domain.size(), 0);
    const auto& vals = binned.categorical(c);
    for (std::size_t r = 0; r < n; ++r) {
      auto it = std::lower_bound(table.domain.begin(), table.domain.end(), vals[r]);
      std::size_t v = static_cast<std::size_t>(it - table.domain.begin());
      if (labels[r]) ++count_pos[v];
      else ++count_neg[v];
    }
    const double denom_pos = static_cast<double>(n_pos) + alpha * V;
    const double denom_neg = static_cast<double>(n_neg) + alpha * V;
    for (std::size_t v = 0; v < table.domain.size(); ++v) {
      table.log_like_positive.push_back(
          std::log((static_cast<double>(count_pos[v]) + alpha) / denom_pos));
      table.log_like_negative.push_back(
          std::log((static_cast<double>(count_neg[v]) + alpha) / denom_neg));
    }
    table.unseen_log_positive = std::log(alpha / denom_pos);
    table.unseen_log_negative = std::log(alpha / denom_neg);
    model.tables_.push_back(std::move(table));
  }
  return model;
}

std::vector<double> NaiveBayesModel::score(const Dataset& data, WarningLog* warnings) const {
  const std::size_t n = data.n_rows();
  std::vector<double> out(n);
  const double log_prior_pos = std::log(prior_positive_);
  const double log_prior_neg = std::log(1.0 - prior_positive_);

  struct ColumnView {
    const FeatureTable* table;
    const std::vector<double>* numeric = nullptr;
    const std::vector<std::string>* categorical = nullptr;
    const std::vector<double>* edges = nullptr;
  };
  std::vector<ColumnView> views;
  std::set<std::string> warned;
  for (const auto& table : tables_) {
    ColumnView view;
    view.table = &table;
    std::size_t c = data.schema().index_of(table.column);
    if (data.schema().columns[c].kind == ColumnKind::numeric) {
      auto it = binning_.edges.find(table.column);
      if (it == binning_.edges.end())
        throw Error(Errc::encoding_mismatch,
                    "column '" + table.column + "' is numeric but the model saw it categorical");
      view.numeric = &data.numeric(c);
      view.edges = &it->second;
    } else {
      view.categorical = &data.categorical(c);
    }
    views.push_back(view);
  }

  for (std::size_t r = 0; r < n; ++r) {
    double lp = log_prior_pos, ln = log_prior_neg;
    for (const auto& view : views) {
      const std::string value = view.numeric ? bin_value((*view.numeric)[r], *view.edges)
                                             : (*view.categorical)[r];
      const auto& dom = view.table->domain;
      auto it = std::lower_bound(dom.begin(), dom.end(), value);
      if (it != dom.end() && *it == value) {
        std::size_t v = static_cast<std::size_t>(it - dom.begin());
        lp += view.table->log_like_positive[v];
        ln += view.table->log_like_negative[v];
      } else {
        lp += view.table->unseen_log_positive;
        ln += view.table->unseen_log_negative;
        if (warned.insert(view.table->column).second)
          warn(warnings, "column '" + view.table->column + "' has values unseen in training" +
                             " (first: '" + value + "'); smoothing mass used");
      }
    }
    // Normalized posterior; subtract the max first for stability.
    const double m = std::max(lp, ln);
    const double ep = std::exp(lp - m), en = std::exp(ln - m);
    out[r] = ep / (ep + en);
  }
  return out;
}

std::string NaiveBayesModel::to_json() const {
  nlohmann::json j;
  j["kind"] = kind();
  j["alpha"] = config_.alpha;
  j["numeric_bins"] = config_.numeric_bins;
  j["prior_positive"] = prior_positive_;
  nlohmann::json tables = nlohmann::json::array();
  for (const auto& t : tables_) {
    nlohmann::json jt;
    jt["column"] = t.column;
    jt["domain"] = t.domain;
    jt["log_like_positive"] = t.log_like_positive;
    jt["log_like_negative"] = t.log_like_negative;
    jt["unseen_log_positive"] = t.unseen_log_positive;
    jt["unseen_log_negative"] = t.unseen_log_negative;
    tables.push_back(std::move(jt));
  }
  j["tables"] = std::move(tables);
  nlohmann::json edges = nlohmann::json::object();
  for (const auto& [name, e] : binning_.edges) edges[name] = e;
  j["bin_edges"] = std::move(edges);
  return j.dump(2);
}

}  // namespace fairkit
