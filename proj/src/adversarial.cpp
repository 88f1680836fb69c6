#include "fairkit/adversarial.hpp"

#include <algorithm>
#include <cmath>

#include "fairkit/rng.hpp"
#include "vendor/json.hpp"

namespace fairkit {

namespace {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

// Packed main parameters: W1 (hidden x input, row-major), b1, wA, bA.
struct MainView {
  const double* w1;
  const double* b1;
  const double* wa;
  double ba;
};

MainView unpack(std::span<const double> main_params, std::size_t hidden, std::size_t input) {
  MainView v;
  v.w1 = main_params.data();
  v.b1 = main_params.data() + hidden * input;
  v.wa = v.b1 + hidden;
  v.ba = *(v.wa + hidden);
  return v;
}

void forward_hidden(const MainView& v, const double* x, std::size_t hidden, std::size_t input,
                    double* h) {
  for (std::size_t k = 0; k < hidden; ++k) {
    double t = v.b1[k];
    const double* row = v.w1 + k * input;
    for (std::size_t j = 0; j < input; ++j) t += row[j] * x[j];
    h[k] = std::tanh(t);
  }
}

std::vector<double> initial_params(const AdversarialConfig& config, std::size_t input,
                                   bool adversary) {
  // One fixed draw order: W1, wA, wB, so the adversary's init does not depend
  // on how many main parameters were drawn first.
  Rng rng(config.seed);
  const std::size_t hidden = config.hidden;
  std::vector<double> w1(hidden * input), wa(hidden), wb(hidden);
  auto small = [&] { return (rng.next_double() * 2.0 - 1.0) * 0.1; };
  for (auto& v : w1) v = small();
  for (auto& v : wa) v = small();
  for (auto& v : wb) v = small();
  std::vector<double> out;
  if (adversary) {
    out = std::move(wb);
    out.push_back(0.0);  // bB
  } else {
    out = std::move(w1);
    out.insert(out.end(), hidden, 0.0);  // b1
    out.insert(out.end(), wa.begin(), wa.end());
    out.push_back(0.0);  // bA
  }
  return out;
}

}  // namespace

AdversarialObjective::AdversarialObjective(const Dataset& data, const AdversarialConfig& config)
    : config_(config) {
  if (config.hidden < 1) throw Error(Errc::invalid_config, "hidden width must be >= 1");
  if (!(config.learning_rate > 0.0))
    throw Error(Errc::invalid_config, "learning_rate must be positive");
  if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda))
    throw Error(Errc::invalid_config, "lambda must be finite and >= 0");
  labels_ = data.labels01();
  groups_ = data.groups01();
  n_ = data.n_rows();
  if (n_ == 0) throw Error(Errc::empty_input, "cannot fit on an empty dataset");
  const auto pos = std::count(labels_.begin(), labels_.end(), 1);
  if (pos == 0 || static_cast<std::size_t>(pos) == n_)
    throw Error(Errc::single_class_dataset, "training data contains a single label value");
  const auto priv = std::count(groups_.begin(), groups_.end(), 1);
  if (priv == 0 || static_cast<std::size_t>(priv) == n_)
    throw Error(Errc::single_group_dataset, "training data contains a single protected value");
  encoder_ = FeatureEncoder(data);
  matrix_ = encoder_.encode(data);
  input_dim_ = encoder_.dim();
}

std::size_t AdversarialObjective::main_dim() const {
  return config_.hidden * input_dim_ + 2 * config_.hidden + 1;
}

std::vector<double> AdversarialObjective::initial_main_params() const {
  return initial_params(config_, input_dim_, false);
}

std::vector<double> AdversarialObjective::initial_adversary() const {
  return initial_params(config_, input_dim_, true);
}

double AdversarialObjective::main_value(std::span<const double> main_params,
                                        std::span<const double> adversary) const {
  const std::size_t H = config_.hidden;
  MainView v = unpack(main_params, H, input_dim_);
  const double* wb = adversary.data();
  const double bb = adversary[H];
  std::vector<double> h(H);
  double nll_a = 0, nll_b = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    forward_hidden(v, matrix_.data() + i * input_dim_, H, input_dim_, h.data());
    double ta = v.ba, tb = bb;
    for (std::size_t k = 0; k < H; ++k) {
      ta += v.wa[k] * h[k];
      tb += wb[k] * h[k];
    }
    nll_a += softplus(ta) - (labels_[i] ? ta : 0.0);
    nll_b += softplus(tb) - (groups_[i] ? tb : 0.0);
  }
  const double inv_n = 1.0 / static_cast<double>(n_);
  return inv_n * nll_a - config_.lambda * inv_n * nll_b;
}

std::vector<double> AdversarialObjective::main_gradient(std::span<const double> main_params,
                                                        std::span<const double> adversary) const {
  const std::size_t H = config_.hidden, D = input_dim_;
  MainView v = unpack(main_params, H, D);
  const double* wb = adversary.data();
  const double bb = adversary[H];
  std::vector<double> grad(main_dim(), 0.0);
  double* g_w1 = grad.data();
  double* g_b1 = grad.data() + H * D;
  double* g_wa = g_b1 + H;
  double& g_ba = grad[main_dim() - 1];

  const double inv_n = 1.0 / static_cast<double>(n_);
  std::vector<double> h(H);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* x = matrix_.data() + i * D;
    forward_hidden(v, x, H, D, h.data());
    double ta = v.ba, tb = bb;
    for (std::size_t k = 0; k < H; ++k) {
      ta += v.wa[k] * h[k];
      tb += wb[k] * h[k];
    }
    const double ea = inv_n * (sigmoid(ta) - (labels_[i] ? 1.0 : 0.0));
    const double eb = -config_.lambda * inv_n * (sigmoid(tb) - (groups_[i] ? 1.0 : 0.0));
    g_ba += ea;
    for (std::size_t k = 0; k < H; ++k) {
      g_wa[k] += ea * h[k];
      const double dh = (ea * v.wa[k] + eb * wb[k]) * (1.0 - h[k] * h[k]);
      g_b1[k] += dh;
      double* row = g_w1 + k * D;
      for (std::size_t j = 0; j < D; ++j) row[j] += dh * x[j];
    }
  }
  return grad;
}

double AdversarialObjective::adversary_value(std::span<const double> main_params,
                                             std::span<const double> adversary) const {
  const std::size_t H = config_.hidden;
  MainView v = unpack(main_params, H, input_dim_);
  const double* wb = adversary.data();
  const double bb = adversary[H];
  std::vector<double> h(H);
  double nll_b = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    forward_hidden(v, matrix_.data() + i * input_dim_, H, input_dim_, h.data());
    double tb = bb;
    for (std::size_t k = 0; k < H; ++k) tb += wb[k] * h[k];
    nll_b += softplus(tb) - (groups_[i] ? tb : 0.0);
  }
  return nll_b / static_cast<double>(n_);
}

std::vector<double> AdversarialObjective::adversary_gradient(
    std::span<const double> main_params, std::span<const double> adversary) const {
  const std::size_t H = config_.hidden;
  MainView v = unpack(main_params, H, input_dim_);
  const double* wb = adversary.data();
  const double bb = adversary[H];
  std::vector<double> grad(H + 1, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n_);
  std::vector<double> h(H);
  for (std::size_t i = 0; i < n_; ++i) {
    forward_hidden(v, matrix_.data() + i * input_dim_, H, input_dim_, h.data());
    double tb = bb;
    for (std::size_t k = 0; k < H; ++k) tb += wb[k] * h[k];
    const double eb = inv_n * (sigmoid(tb) - (groups_[i] ? 1.0 : 0.0));
    for (std::size_t k = 0; k < H; ++k) grad[k] += eb * h[k];
    grad[H] += eb;
  }
  return grad;
}

AdversarialModel AdversarialModel::fit(const Dataset& data, const AdversarialConfig& config) {
  AdversarialObjective obj(data, config);
  std::vector<double> main = obj.initial_main_params();
  std::vector<double> adv = obj.initial_adversary();
  const double lr = config.learning_rate;

  std::vector<double> history;
  history.push_back(obj.main_value(main, adv));
  if (!std::isfinite(history.back()))
    throw Error(Errc::non_finite_loss, "loss not finite at epoch 0");
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto g_adv = obj.adversary_gradient(main, adv);
    for (std::size_t j = 0; j < adv.size(); ++j) adv[j] -= lr * g_adv[j];
    const auto g_main = obj.main_gradient(main, adv);
    for (std::size_t j = 0; j < main.size(); ++j) main[j] -= lr * g_main[j];
    const double loss = obj.main_value(main, adv);
    if (!std::isfinite(loss))
      throw Error(Errc::non_finite_loss, "loss not finite at epoch " + std::to_string(epoch + 1));
    history.push_back(loss);
  }

  AdversarialModel model;
  model.config_ = config;
  model.encoder_ = std::move(obj.encoder_);
  model.input_dim_ = obj.input_dim_;
  const std::size_t H = config.hidden, D = model.input_dim_;
  model.w1_.assign(main.begin(), main.begin() + H * D);
  model.b1_.assign(main.begin() + H * D, main.begin() + H * D + H);
  model.wa_.assign(main.begin() + H * D + H, main.begin() + H * D + 2 * H);
  model.ba_ = main[H * D + 2 * H];
  model.wb_.assign(adv.begin(), adv.begin() + H);
  model.bb_ = adv[H];
  model.loss_history_ = std::move(history);
  return model;
}

namespace {

std::vector<double> head_scores(const FeatureEncoder& encoder, const Dataset& data,
                                const std::vector<double>& w1, const std::vector<double>& b1,
                                const std::vector<double>& head_w, double head_b,
                                WarningLog* warnings) {
  const auto matrix = encoder.encode(data, warnings);
  const std::size_t D = encoder.dim(), H = b1.size();
  std::vector<double> out(data.n_rows());
  std::vector<double> h(H);
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    const double* x = matrix.data() + i * D;
    for (std::size_t k = 0; k < H; ++k) {
      double t = b1[k];
      const double* row = w1.data() + k * D;
      for (std::size_t j = 0; j < D; ++j) t += row[j] * x[j];
      h[k] = std::tanh(t);
    }
    double t = head_b;
    for (std::size_t k = 0; k < H; ++k) t += head_w[k] * h[k];
    out[i] = sigmoid(t);
  }
  return out;
}

}  // namespace

std::vector<double> AdversarialModel::score(const Dataset& data, WarningLog* warnings) const {
  return head_scores(encoder_, data, w1_, b1_, wa_, ba_, warnings);
}

std::vector<double> AdversarialModel::adversary_score(const Dataset& data,
                                                      WarningLog* warnings) const {
  return head_scores(encoder_, data, w1_, b1_, wb_, bb_, warnings);
}

std::string AdversarialModel::to_json() const {
  nlohmann::json j;
  j["kind"] = kind();
  j["hidden"] = config_.hidden;
  j["lambda"] = config_.lambda;
  j["learning_rate"] = config_.learning_rate;
  j["epochs"] = config_.epochs;
  j["seed"] = config_.seed;
  j["w1"] = w1_;
  j["b1"] = b1_;
  j["wa"] = wa_;
  j["ba"] = ba_;
  j["wb"] = wb_;
  j["bb"] = bb_;
  j["final_loss"] = loss_history_.empty() ? 0.0 : loss_history_.back();
  j["encoder"] = nlohmann::json::parse(encoder_.to_json());
  return j.dump(2);
}

}  // namespace fairkit
