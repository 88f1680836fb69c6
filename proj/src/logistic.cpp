#include "fairkit/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "vendor/json.hpp"

namespace fairkit {

namespace {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

struct GroupStats {
  double n_priv = 0, n_unpriv = 0;
  double sum_priv = 0, sum_unpriv = 0;  // sums of predicted probabilities
};

GroupStats group_stats(const std::vector<double>& probs, const std::vector<int>& groups) {
  GroupStats st;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (groups[i]) {
      st.n_priv += 1;
      st.sum_priv += probs[i];
    } else {
      st.n_unpriv += 1;
      st.sum_unpriv += probs[i];
    }
  }
  return st;
}

// Per-group log-ratio difference: L_z = ln(P(1,z)/(P(1)P(z))) - ln(P(0,z)/(P(0)P(z))).
// Shared by the index and its gradient so the two cannot drift apart.
struct MiTerms {
  double pi = 0.0;
  double l_priv = 0.0;
  double l_unpriv = 0.0;
};

MiTerms mi_terms(const GroupStats& st, double n, double floor) {
  auto cl = [floor](double v) { return std::max(v, floor); };
  const double c_priv = st.n_priv / n, c_unpriv = st.n_unpriv / n;
  const double a1_priv = st.sum_priv / n, a1_unpriv = st.sum_unpriv / n;
  const double a0_priv = (st.n_priv - st.sum_priv) / n;
  const double a0_unpriv = (st.n_unpriv - st.sum_unpriv) / n;
  const double b1 = a1_priv + a1_unpriv, b0 = 1.0 - b1;

  MiTerms t;
  auto log_ratio = [&](double a, double b, double c) { return std::log(cl(a) / (cl(b) * c)); };
  if (c_priv > 0.0) {
    t.l_priv = log_ratio(a1_priv, b1, c_priv) - log_ratio(a0_priv, b0, c_priv);
    if (a1_priv > 0.0) t.pi += a1_priv * log_ratio(a1_priv, b1, c_priv);
    if (a0_priv > 0.0) t.pi += a0_priv * log_ratio(a0_priv, b0, c_priv);
  }
  if (c_unpriv > 0.0) {
    t.l_unpriv = log_ratio(a1_unpriv, b1, c_unpriv) - log_ratio(a0_unpriv, b0, c_unpriv);
    if (a1_unpriv > 0.0) t.pi += a1_unpriv * log_ratio(a1_unpriv, b1, c_unpriv);
    if (a0_unpriv > 0.0) t.pi += a0_unpriv * log_ratio(a0_unpriv, b0, c_unpriv);
  }
  return t;
}

}  // namespace

double prejudice_index(const std::vector<double>& probs, const std::vector<int>& groups,
                       double clamp_floor) {
  if (probs.size() != groups.size())
    throw Error(Errc::length_mismatch, "probs and groups differ in length");
  if (probs.empty()) throw Error(Errc::empty_input, "no rows");
  GroupStats st = group_stats(probs, groups);
  return mi_terms(st, static_cast<double>(probs.size()), clamp_floor).pi;
}

LogisticObjective::LogisticObjective(const Dataset& data, const LogisticConfig& config,
                                     std::optional<PrejudiceConfig> prejudice)
    : prejudice_(prejudice) {
  labels_ = data.labels01();
  groups_ = data.groups01();
  n_ = data.n_rows();
  if (n_ == 0) throw Error(Errc::empty_input, "cannot fit on an empty dataset");
  const auto pos = std::count(labels_.begin(), labels_.end(), 1);
  if (pos == 0 || static_cast<std::size_t>(pos) == n_)
    throw Error(Errc::single_class_dataset, "training data contains a single label value");
  if (prejudice_) {
    const auto priv = std::count(groups_.begin(), groups_.end(), 1);
    if (priv == 0 || static_cast<std::size_t>(priv) == n_)
      throw Error(Errc::single_group_dataset,
                  "training data contains a single protected value");
  }
  encoder_ = FeatureEncoder(data, config.include_protected);
  matrix_ = encoder_.encode(data);
  dim_ = encoder_.dim() + 1;
  l2_ = config.l2;
}

std::vector<double> LogisticObjective::probabilities(std::span<const double> weights) const {
  const std::size_t d = dim_ - 1;
  std::vector<double> probs(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double t = weights[d];
    const double* row = matrix_.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) t += row[j] * weights[j];
    probs[i] = sigmoid(t);
  }
  return probs;
}

double LogisticObjective::value(std::span<const double> weights) const {
  const std::size_t d = dim_ - 1;
  double nll = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    double t = weights[d];
    const double* row = matrix_.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) t += row[j] * weights[j];
    nll += softplus(t) - (labels_[i] ? t : 0.0);
  }
  nll /= static_cast<double>(n_);
  double reg = 0;
  for (std::size_t j = 0; j < d; ++j) reg += weights[j] * weights[j];
  double obj = nll + l2_ * reg;
  if (prejudice_) {
    const auto probs = probabilities(weights);
    obj += prejudice_->eta * prejudice_index(probs, groups_, prejudice_->clamp_floor);
  }
  return obj;
}

std::vector<double> LogisticObjective::gradient(std::span<const double> weights) const {
  const std::size_t d = dim_ - 1;
  std::vector<double> grad(dim_, 0.0);
  const auto probs = probabilities(weights);
  for (std::size_t i = 0; i < n_; ++i) {
    const double err = probs[i] - (labels_[i] ? 1.0 : 0.0);
    const double* row = matrix_.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) grad[j] += err * row[j];
    grad[d] += err;
  }
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (auto& g : grad) g *= inv_n;
  for (std::size_t j = 0; j < d; ++j) grad[j] += 2.0 * l2_ * weights[j];

  if (prejudice_) {
    GroupStats st = group_stats(probs, groups_);
    MiTerms terms = mi_terms(st, static_cast<double>(n_), prejudice_->clamp_floor);
    for (std::size_t i = 0; i < n_; ++i) {
      const double lz = groups_[i] ? terms.l_priv : terms.l_unpriv;
      const double w = prejudice_->eta * inv_n * probs[i] * (1.0 - probs[i]) * lz;
      const double* row = matrix_.data() + i * d;
      for (std::size_t j = 0; j < d; ++j) grad[j] += w * row[j];
      grad[d] += w;
    }
  }
  return grad;
}

LogisticModel LogisticModel::fit_impl(const Dataset& data, const LogisticConfig& config,
                                      std::optional<PrejudiceConfig> prejudice) {
  if (!(config.learning_rate > 0.0))
    throw Error(Errc::invalid_config, "learning_rate must be positive");
  if (config.l2 < 0.0) throw Error(Errc::invalid_config, "l2 must be >= 0");
  if (prejudice && !(std::isfinite(prejudice->eta) && prejudice->eta >= 0.0))
    throw Error(Errc::invalid_config, "eta must be finite and >= 0");
  LogisticObjective obj(data, config, prejudice);

  std::vector<double> w(obj.dim(), 0.0);
  std::vector<double> history;
  double lr = config.learning_rate;
  double loss = obj.value(w);
  if (!std::isfinite(loss)) throw Error(Errc::non_finite_loss, "loss not finite at epoch 0");
  history.push_back(loss);
  std::vector<double> cand(w.size());
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto grad = obj.gradient(w);
    double cand_loss;
    for (;;) {
      for (std::size_t j = 0; j < w.size(); ++j) cand[j] = w[j] - lr * grad[j];
      cand_loss = obj.value(cand);
      if (!std::isfinite(cand_loss))
        throw Error(Errc::non_finite_loss,
                    "loss not finite at epoch " + std::to_string(epoch + 1));
      if (cand_loss <= loss + 1e-12) break;
      lr *= 0.5;
      if (lr < 1e-300) {
        cand = w;
        cand_loss = loss;
        break;
      }
    }
    w = cand;
    loss = cand_loss;
    history.push_back(loss);
  }

  LogisticModel model;
  model.encoder_ = std::move(obj.encoder_);
  model.weights_ = std::move(w);
  model.loss_history_ = std::move(history);
  model.config_ = config;
  model.prejudice_ = prejudice;
  if (prejudice)
    model.final_pi_ = prejudice_index(obj.probabilities(model.weights_), obj.groups_,
                                      prejudice->clamp_floor);
  return model;
}

LogisticModel LogisticModel::fit(const Dataset& data, const LogisticConfig& config) {
  return fit_impl(data, config, std::nullopt);
}

LogisticModel LogisticModel::fit_prejudice(const Dataset& data, const LogisticConfig& config,
                                           const PrejudiceConfig& prejudice) {
  return fit_impl(data, config, prejudice);
}

std::vector<double> LogisticModel::score(const Dataset& data, WarningLog* warnings) const {
  const auto matrix = encoder_.encode(data, warnings);
  const std::size_t d = encoder_.dim();
  std::vector<double> out(data.n_rows());
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    double t = weights_[d];
    const double* row = matrix.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) t += row[j] * weights_[j];
    out[i] = sigmoid(t);
  }
  return out;
}

const char* LogisticModel::kind() const {
  return prejudice_ ? "prejudice_remover" : "logistic";
}

std::string LogisticModel::to_json() const {
  nlohmann::json j;
  j["kind"] = kind();
  j["weights"] = weights_;
  j["intercept_position"] = "last";
  j["learning_rate"] = config_.learning_rate;
  j["epochs"] = config_.epochs;
  j["l2"] = config_.l2;
  j["include_protected"] = config_.include_protected;
  if (prejudice_) {
    j["eta"] = prejudice_->eta;
    j["clamp_floor"] = prejudice_->clamp_floor;
    j["final_prejudice_index"] = final_pi_;
  }
  j["final_loss"] = loss_history_.empty() ? 0.0 : loss_history_.back();
  j["encoder"] = nlohmann::json::parse(encoder_.to_json());
  return j.dump(2);
}

}  // namespace fairkit
