#include "vendor/doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairkit/adversarial.hpp"
#include "fairkit/logistic.hpp"
#include "fairkit/naive_bayes.hpp"
#include "fairkit/rng.hpp"
#include "fairkit/synthetic.hpp"
#include "fairkit/trainer.hpp"
#include "helpers.hpp"
#include "vendor/json.hpp"

using namespace fairkit;

namespace {

// Central finite differences, the standard derivative oracle.
template <class F>
std::vector<double> fd_gradient(F&& f, const std::vector<double>& at, double step = 1e-5) {
  std::vector<double> grad(at.size());
  std::vector<double> w = at;
  for (std::size_t j = 0; j < at.size(); ++j) {
    w[j] = at[j] + step;
    const double up = f(w);
    w[j] = at[j] - step;
    const double down = f(w);
    w[j] = at[j];
    grad[j] = (up - down) / (2.0 * step);
  }
  return grad;
}

double max_rel_error(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double denom = std::max({1.0, std::abs(a[j]), std::abs(b[j])});
    worst = std::max(worst, std::abs(a[j] - b[j]) / denom);
  }
  return worst;
}

// v0 numeric, c0 three-level categorical, both labels and both groups present.
Dataset gradcheck_dataset() {
  Schema s;
  s.columns.push_back({"v0", ColumnKind::numeric, ColumnRole::feature});
  s.columns.push_back({"c0", ColumnKind::categorical, ColumnRole::feature});
  s.columns.push_back({"prot", ColumnKind::categorical, ColumnRole::protected_attr});
  s.columns.push_back({"label", ColumnKind::categorical, ColumnRole::label});
  s.favorable_label = "1";
  s.privileged_value = "1";
  std::vector<Column> cols(4);
  const std::vector<double> v0 = {0.2, -1.1, 0.7, 2.3, -0.4, 1.6, -2.0, 0.9, 0.1, -0.8};
  const std::vector<std::string> c0 = {"a", "b", "c", "a", "b", "c", "a", "b", "c", "a"};
  const std::vector<std::string> prot = {"1", "0", "1", "0", "1", "0", "0", "1", "0", "1"};
  const std::vector<std::string> label = {"1", "0", "1", "1", "0", "1", "0", "0", "1", "0"};
  cols[0].numeric = v0;
  cols[1].categorical = c0;
  cols[2].categorical = prot;
  cols[3].categorical = label;
  std::vector<std::int64_t> ids;
  for (int i = 0; i < 10; ++i) ids.push_back(i);
  return Dataset(s, ids, cols);
}

std::vector<double> jittered(std::size_t n, std::uint64_t seed, double scale) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = (rng.next_double() * 2.0 - 1.0) * scale;
  return out;
}

double training_accuracy(const Model& model, const Dataset& data) {
  const auto scores = model.score(data);
  const auto labels = data.labels01();
  double hits = 0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    hits += (scores[i] >= 0.5 ? 1 : 0) == labels[i] ? 1.0 : 0.0;
  return hits / static_cast<double>(scores.size());
}

}  // namespace

TEST_CASE("logistic gradient matches central differences") {
  auto data = gradcheck_dataset();
  LogisticConfig cfg;
  cfg.l2 = 0.01;
  LogisticObjective obj(data, cfg);
  const auto w = jittered(obj.dim(), 123, 0.5);

  const auto analytic = obj.gradient(w);
  const auto numeric =
      fd_gradient([&](const std::vector<double>& x) { return obj.value(x); }, w);
  CHECK(max_rel_error(analytic, numeric) < 1e-5);
}

TEST_CASE("prejudice objective gradient matches central differences") {
  auto data = gradcheck_dataset();
  LogisticConfig cfg;
  cfg.l2 = 0.01;
  PrejudiceConfig pre;
  pre.eta = 2.0;
  LogisticObjective obj(data, cfg, pre);
  const auto w = jittered(obj.dim(), 321, 0.5);

  const auto analytic = obj.gradient(w);
  const auto numeric =
      fd_gradient([&](const std::vector<double>& x) { return obj.value(x); }, w);
  CHECK(max_rel_error(analytic, numeric) < 1e-4);

  // The penalty actually participates: dropping it changes the objective.
  LogisticObjective plain(data, cfg);
  CHECK(obj.value(w) != plain.value(w));
}

TEST_CASE("adversarial main-step gradient matches central differences") {
  auto data = gradcheck_dataset();
  AdversarialConfig cfg;
  cfg.hidden = 3;
  cfg.lambda = 0.7;
  cfg.seed = 9;
  AdversarialObjective obj(data, cfg);

  auto main = obj.initial_main_params();
  auto adv = obj.initial_adversary();
  // Move off the init (biases start at zero) so every parameter matters.
  const auto dm = jittered(main.size(), 55, 0.3);
  const auto da = jittered(adv.size(), 56, 0.3);
  for (std::size_t j = 0; j < main.size(); ++j) main[j] += dm[j];
  for (std::size_t j = 0; j < adv.size(); ++j) adv[j] += da[j];

  const auto analytic = obj.main_gradient(main, adv);
  const auto numeric = fd_gradient(
      [&](const std::vector<double>& x) { return obj.main_value(x, adv); }, main);
  CHECK(max_rel_error(analytic, numeric) < 1e-4);

  const auto adv_analytic = obj.adversary_gradient(main, adv);
  const auto adv_numeric = fd_gradient(
      [&](const std::vector<double>& x) { return obj.adversary_value(main, x); }, adv);
  CHECK(max_rel_error(adv_analytic, adv_numeric) < 1e-4);
}

TEST_CASE("logistic separates separable data") {
  Schema s;
  s.columns.push_back({"v0", ColumnKind::numeric, ColumnRole::feature});
  s.columns.push_back({"v1", ColumnKind::numeric, ColumnRole::feature});
  s.columns.push_back({"prot", ColumnKind::categorical, ColumnRole::protected_attr});
  s.columns.push_back({"label", ColumnKind::categorical, ColumnRole::label});
  s.favorable_label = "1";
  s.privileged_value = "1";
  std::vector<Column> cols(4);
  Rng rng(17);
  for (int i = 0; i < 60; ++i) {
    const double a = rng.next_double() * 4 - 2;
    const double b = rng.next_double() * 4 - 2;
    const bool pos = a + b > 0.0;
    // Margin of 0.5 around the separating line.
    cols[0].numeric.push_back(a + (pos ? 0.25 : -0.25));
    cols[1].numeric.push_back(b + (pos ? 0.25 : -0.25));
    cols[2].categorical.push_back(rng.bernoulli(0.5) ? "1" : "0");
    cols[3].categorical.push_back(pos ? "1" : "0");
  }
  std::vector<std::int64_t> ids;
  for (int i = 0; i < 60; ++i) ids.push_back(i);
  Dataset data(s, ids, cols);

  LogisticConfig cfg;
  cfg.epochs = 800;
  cfg.learning_rate = 1.0;
  cfg.l2 = 0.0;
  auto model = LogisticModel::fit(data, cfg);
  CHECK(training_accuracy(model, data) == 1.0);
}

TEST_CASE("zero epochs scores one half everywhere") {
  auto data = gradcheck_dataset();
  LogisticConfig cfg;
  cfg.epochs = 0;
  auto model = LogisticModel::fit(data, cfg);
  for (double v : model.score(data)) CHECK(v == 0.5);
  CHECK(model.loss_history().size() == 1);
}

TEST_CASE("training loss never increases") {
  GeneratorConfig g;
  g.n_rows = 200;
  g.seed = 5;
  auto data = generate_synthetic(g);

  LogisticConfig cfg;
  cfg.epochs = 120;
  cfg.learning_rate = 8.0;  // deliberately too hot: forces the halving path
  auto model = LogisticModel::fit(data, cfg);
  const auto& h = model.loss_history();
  REQUIRE(h.size() == cfg.epochs + 1);
  for (std::size_t e = 1; e < h.size(); ++e) CHECK(h[e] <= h[e - 1] + 1e-12);
}

TEST_CASE("logistic fits are deterministic") {
  GeneratorConfig g;
  g.n_rows = 150;
  g.seed = 2;
  auto data = generate_synthetic(g);
  LogisticConfig cfg;
  cfg.epochs = 50;
  auto a = LogisticModel::fit(data, cfg);
  auto b = LogisticModel::fit(data, cfg);
  CHECK(a.weights() == b.weights());
  CHECK(a.loss_history() == b.loss_history());
  CHECK(a.score(data) == b.score(data));
}

TEST_CASE("identical rows get identical scores") {
  auto data = gradcheck_dataset();
  LogisticConfig cfg;
  cfg.epochs = 40;
  auto model = LogisticModel::fit(data, cfg);

  // Score a dataset whose rows 0 and 1 are copies of training row 0.
  std::vector<Column> cols(4);
  for (int copy = 0; copy < 2; ++copy) {
    cols[0].numeric.push_back(data.numeric(0)[0]);
    cols[1].categorical.push_back(data.categorical(1)[0]);
    cols[2].categorical.push_back(copy ? "0" : "1");  // protected is not a feature
    cols[3].categorical.push_back(copy ? "0" : "1");
  }
  Dataset probe(data.schema(), {0, 1}, cols);
  const auto scores = model.score(probe);
  CHECK(scores[0] == scores[1]);
}

TEST_CASE("single class data is rejected") {
  Schema s = testutil::binary_schema(1);
  auto data = testutil::dataset_from_strings(s, {
                                                    {"0", "1", "1"},
                                                    {"1", "0", "1"},
                                                    {"0", "0", "1"},
                                                });
  try {
    LogisticModel::fit(data, {});
    FAIL("expected single_class_dataset");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::single_class_dataset);
  }
  CHECK_THROWS_AS(NaiveBayesModel::fit(data), Error);
  CHECK_THROWS_AS(AdversarialModel::fit(data, {}), Error);
}

TEST_CASE("config validation") {
  auto data = gradcheck_dataset();
  LogisticConfig bad;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(LogisticModel::fit(data, bad), Error);
  bad = {};
  bad.l2 = -1.0;
  CHECK_THROWS_AS(LogisticModel::fit(data, bad), Error);

  PrejudiceConfig pre;
  pre.eta = -1.0;
  CHECK_THROWS_AS(LogisticModel::fit_prejudice(data, {}, pre), Error);

  AdversarialConfig adv;
  adv.hidden = 0;
  CHECK_THROWS_AS(AdversarialModel::fit(data, adv), Error);
  adv = {};
  adv.lambda = -0.5;
  CHECK_THROWS_AS(AdversarialModel::fit(data, adv), Error);

  NaiveBayesModel::Config nb;
  nb.alpha = 0.0;
  CHECK_THROWS_AS(NaiveBayesModel::fit(data, nb), Error);
  nb = {};
  nb.numeric_bins = 0;
  CHECK_THROWS_AS(NaiveBayesModel::fit(data, nb), Error);
}

TEST_CASE("a non finite input surfaces as a loss error naming the epoch") {
  Schema s;
  s.columns.push_back({"v0", ColumnKind::numeric, ColumnRole::feature});
  s.columns.push_back({"prot", ColumnKind::categorical, ColumnRole::protected_attr});
  s.columns.push_back({"label", ColumnKind::categorical, ColumnRole::label});
  s.favorable_label = "1";
  s.privileged_value = "1";
  std::vector<Column> cols(3);
  cols[0].numeric = {1.0, std::numeric_limits<double>::infinity(), 2.0, 3.0};
  cols[1].categorical = {"1", "0", "1", "0"};
  cols[2].categorical = {"1", "0", "0", "1"};
  Dataset data(s, {0, 1, 2, 3}, cols);
  try {
    LogisticModel::fit(data, {});
    FAIL("expected non_finite_loss");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::non_finite_loss);
    CHECK(std::string(e.what()).find("epoch 0") != std::string::npos);
  }
}

TEST_CASE("including the protected column is a visible treatment change") {
  // Features are pure noise; the label equals the protected value. Without
  // the protected column the model cannot beat chance by much; with it the
  // data is perfectly separable.
  Schema s = testutil::binary_schema(1);
  std::vector<std::vector<std::string>> rows;
  Rng rng(41);
  for (int i = 0; i < 60; ++i) {
    const std::string z = rng.bernoulli(0.5) ? "1" : "0";
    rows.push_back({rng.bernoulli(0.5) ? "1" : "0", z, z});
  }
  auto data = testutil::dataset_from_strings(s, rows);

  LogisticConfig cfg;
  cfg.epochs = 600;
  cfg.learning_rate = 1.0;
  cfg.l2 = 0.0;
  auto blind = LogisticModel::fit(data, cfg);
  cfg.include_protected = true;
  auto sighted = LogisticModel::fit(data, cfg);

  CHECK(training_accuracy(sighted, data) == 1.0);
  CHECK(training_accuracy(blind, data) < 0.75);
  CHECK(sighted.encoder().dim() > blind.encoder().dim());
}

TEST_CASE("logistic objective is convex") {
  auto data = gradcheck_dataset();
  LogisticConfig cfg;
  cfg.l2 = 0.01;
  LogisticObjective obj(data, cfg);
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    auto w1 = jittered(obj.dim(), rng.next_u64(), 2.0);
    auto w2 = jittered(obj.dim(), rng.next_u64(), 2.0);
    std::vector<double> mid(obj.dim());
    for (std::size_t j = 0; j < mid.size(); ++j) mid[j] = 0.5 * (w1[j] + w2[j]);
    CHECK(obj.value(mid) <= 0.5 * (obj.value(w1) + obj.value(w2)) + 1e-12);
  }
}

TEST_CASE("prejudice index is nonnegative") {
  Rng rng(88);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.next_below(50);
    std::vector<double> probs(n);
    std::vector<int> groups(n);
    for (auto& p : probs) p = rng.next_double();
    for (auto& z : groups) z = rng.bernoulli(0.5) ? 1 : 0;
    groups[0] = 1;
    if (n > 1) groups[1] = 0;
    CHECK(prejudice_index(probs, groups) >= -1e-8);
  }
}

TEST_CASE("prejudice index is zero when scores carry no group information") {
  // Rows come in feature-identical pairs, one per group, so the per-group
  // mean predicted probabilities are exactly equal and the estimated joint
  // factorizes.
  Schema s = testutil::binary_schema(2);
  std::vector<std::vector<std::string>> rows;
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const std::string f0 = rng.bernoulli(0.5) ? "1" : "0";
    const std::string f1 = rng.bernoulli(0.5) ? "1" : "0";
    const std::string y = rng.bernoulli(0.5) ? "1" : "0";
    rows.push_back({f0, f1, "1", y});
    rows.push_back({f0, f1, "0", y});
  }
  auto data = testutil::dataset_from_strings(s, rows);
  LogisticConfig cfg;
  cfg.epochs = 100;
  auto model = LogisticModel::fit(data, cfg);
  CHECK(prejudice_index(model.score(data), data.groups01()) < 1e-6);
}

TEST_CASE("prejudice index mismatched lengths") {
  CHECK_THROWS_AS(prejudice_index({0.5, 0.5}, {1}), Error);
  CHECK_THROWS_AS(prejudice_index({}, {}), Error);
}

TEST_CASE("eta zero reproduces the plain fit exactly") {
  GeneratorConfig g;
  g.n_rows = 200;
  g.seed = 4;
  auto data = generate_synthetic(g);
  LogisticConfig cfg;
  cfg.epochs = 80;
  PrejudiceConfig pre;
  pre.eta = 0.0;
  auto plain = LogisticModel::fit(data, cfg);
  auto zero = LogisticModel::fit_prejudice(data, cfg, pre);
  CHECK(plain.weights() == zero.weights());
  CHECK(plain.loss_history() == zero.loss_history());
}

TEST_CASE("stronger eta lowers the trained prejudice index") {
  GeneratorConfig g;
  g.n_rows = 1000;
  g.bias_strength = 0.3;
  g.seed = 7;
  auto data = generate_synthetic(g);
  LogisticConfig cfg;
  cfg.epochs = 300;

  double previous = 0.0;
  bool first = true;
  for (double eta : {0.0, 1.0, 10.0}) {
    PrejudiceConfig pre;
    pre.eta = eta;
    auto model = LogisticModel::fit_prejudice(data, cfg, pre);
    const double pi = model.final_prejudice_index();
    CHECK(pi >= -1e-8);
    if (!first) CHECK(pi <= previous + 1e-6);
    previous = pi;
    first = false;
  }
}

TEST_CASE("adversary accuracy responds to lambda") {
  GeneratorConfig g;
  g.n_rows = 400;
  g.bias_strength = 0.3;
  g.proxy_correlation = 1.0;  // one feature equals the protected value
  g.seed = 7;
  auto data = generate_synthetic(g);
  const auto groups = data.groups01();
  double share = 0;
  for (int z : groups) share += z;
  share /= static_cast<double>(groups.size());
  const double baseline = std::max(share, 1.0 - share);

  auto adversary_accuracy = [&](double lambda) {
    AdversarialConfig cfg;
    cfg.lambda = lambda;
    cfg.epochs = 600;
    cfg.seed = 7;
    auto model = AdversarialModel::fit(data, cfg);
    const auto adv = model.adversary_score(data);
    double hits = 0;
    for (std::size_t i = 0; i < adv.size(); ++i)
      hits += (adv[i] >= 0.5 ? 1 : 0) == groups[i] ? 1.0 : 0.0;
    return hits / static_cast<double>(adv.size());
  };

  // Unweighted: the representation leaks the protected bit and the adversary
  // reads it out nearly perfectly.
  CHECK(adversary_accuracy(0.0) >= baseline + 0.20);
  // Weighted: the main step scrubs the representation back to the base rate.
  CHECK(std::abs(adversary_accuracy(1.0) - baseline) <= 0.05);
}

TEST_CASE("lambda zero decouples the main step from the adversary") {
  auto data = gradcheck_dataset();
  AdversarialConfig cfg;
  cfg.hidden = 4;
  cfg.lambda = 0.0;
  cfg.seed = 11;
  AdversarialObjective obj(data, cfg);
  auto main = obj.initial_main_params();
  const auto da = jittered(cfg.hidden + 1, 99, 1.0);
  auto adv1 = obj.initial_adversary();
  auto adv2 = adv1;
  for (std::size_t j = 0; j < adv2.size(); ++j) adv2[j] += da[j];

  CHECK(obj.main_value(main, adv1) == obj.main_value(main, adv2));
  CHECK(obj.main_gradient(main, adv1) == obj.main_gradient(main, adv2));
}

TEST_CASE("adversarial initialization draw order is pinned") {
  auto data = gradcheck_dataset();
  AdversarialConfig cfg;
  cfg.hidden = 3;
  cfg.seed = 31;
  AdversarialObjective obj(data, cfg);
  const std::size_t D = (obj.main_dim() - 2 * cfg.hidden - 1) / cfg.hidden;

  // The contract: one stream draws W1, then wA, then wB, each value
  // uniform in [-0.1, 0.1]; biases start at zero.
  Rng rng(cfg.seed);
  std::vector<double> draws(cfg.hidden * D + 2 * cfg.hidden);
  for (auto& v : draws) v = (rng.next_double() * 2.0 - 1.0) * 0.1;

  const auto main = obj.initial_main_params();
  REQUIRE(main.size() == cfg.hidden * D + 2 * cfg.hidden + 1);
  for (std::size_t j = 0; j < cfg.hidden * D; ++j) CHECK(main[j] == draws[j]);
  for (std::size_t k = 0; k < cfg.hidden; ++k) {
    CHECK(main[cfg.hidden * D + k] == 0.0);                               // b1
    CHECK(main[cfg.hidden * D + cfg.hidden + k] == draws[cfg.hidden * D + k]);  // wA
  }
  CHECK(main.back() == 0.0);  // bA

  const auto adv = obj.initial_adversary();
  REQUIRE(adv.size() == cfg.hidden + 1);
  for (std::size_t k = 0; k < cfg.hidden; ++k)
    CHECK(adv[k] == draws[cfg.hidden * D + cfg.hidden + k]);  // wB
  CHECK(adv.back() == 0.0);  // bB
}

TEST_CASE("adversarial fits are deterministic and loss history is complete") {
  GeneratorConfig g;
  g.n_rows = 120;
  g.seed = 13;
  auto data = generate_synthetic(g);
  AdversarialConfig cfg;
  cfg.epochs = 60;
  cfg.seed = 13;
  auto a = AdversarialModel::fit(data, cfg);
  auto b = AdversarialModel::fit(data, cfg);
  CHECK(a.score(data) == b.score(data));
  CHECK(a.adversary_score(data) == b.adversary_score(data));
  CHECK(a.loss_history() == b.loss_history());
  REQUIRE(a.loss_history().size() == cfg.epochs + 1);
  for (double v : a.loss_history()) CHECK(std::isfinite(v));
  CHECK(a.to_json() == b.to_json());
}

TEST_CASE("adversarial rejects single group data") {
  Schema s = testutil::binary_schema(1);
  auto data = testutil::dataset_from_strings(s, {
                                                    {"0", "1", "1"},
                                                    {"1", "1", "0"},
                                                    {"0", "1", "1"},
                                                    {"1", "1", "0"},
                                                });
  try {
    AdversarialModel::fit(data, {});
    FAIL("expected single_group_dataset");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::single_group_dataset);
  }
}

TEST_CASE("naive bayes posterior matches hand arithmetic") {
  // Positive rows: f0 = a, a, b. Negative rows: f0 = b, b, a.
  // With alpha = 1 and a two-value domain:
  //   P(a | +) = (2+1)/(3+2) = 0.6     P(a | -) = (1+1)/(3+2) = 0.4
  // so the posterior for f0 = a is 0.6 and for f0 = b it is 0.4.
  Schema s = testutil::binary_schema(1);
  auto data = testutil::dataset_from_strings(s, {
                                                    {"a", "1", "1"},
                                                    {"a", "0", "1"},
                                                    {"b", "1", "1"},
                                                    {"b", "0", "0"},
                                                    {"b", "1", "0"},
                                                    {"a", "0", "0"},
                                                });
  auto model = NaiveBayesModel::fit(data);
  const auto scores = model.score(data);
  CHECK(std::abs(scores[0] - 0.6) <= 1e-12);
  CHECK(std::abs(scores[1] - 0.6) <= 1e-12);
  CHECK(std::abs(scores[2] - 0.4) <= 1e-12);
  CHECK(std::abs(scores[3] - 0.4) <= 1e-12);
  CHECK(std::abs(scores[5] - 0.6) <= 1e-12);
}

TEST_CASE("naive bayes handles unseen values by smoothing mass") {
  Schema s = testutil::binary_schema(1);
  auto data = testutil::dataset_from_strings(s, {
                                                    {"a", "1", "1"},
                                                    {"a", "0", "1"},
                                                    {"b", "1", "1"},
                                                    {"b", "0", "0"},
                                                    {"b", "1", "0"},
                                                    {"a", "0", "0"},
                                                });
  auto model = NaiveBayesModel::fit(data);
  auto probe = testutil::dataset_from_strings(s, {{"zzz", "1", "1"}, {"a", "0", "0"}});
  WarningLog warnings;
  const auto scores = model.score(probe, &warnings);
  // Equal class counts: the unseen-value likelihoods cancel and the
  // posterior falls back to the prior, 0.5.
  CHECK(std::abs(scores[0] - 0.5) <= 1e-12);
  CHECK(std::abs(scores[1] - 0.6) <= 1e-12);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("f0") != std::string::npos);
}

TEST_CASE("naive bayes bins numeric columns with frozen edges") {
  Schema s;
  s.columns.push_back({"v0", ColumnKind::numeric, ColumnRole::feature});
  s.columns.push_back({"prot", ColumnKind::categorical, ColumnRole::protected_attr});
  s.columns.push_back({"label", ColumnKind::categorical, ColumnRole::label});
  s.favorable_label = "1";
  s.privileged_value = "1";
  std::vector<Column> cols(3);
  // Low values positive, high values negative; a 2-bin split separates them.
  cols[0].numeric = {0.0, 1.0, 2.0, 8.0, 9.0, 10.0};
  cols[1].categorical = {"1", "0", "1", "0", "1", "0"};
  cols[2].categorical = {"1", "1", "1", "0", "0", "0"};
  Dataset data(s, {0, 1, 2, 3, 4, 5}, cols);

  NaiveBayesModel::Config cfg;
  cfg.numeric_bins = 2;
  auto model = NaiveBayesModel::fit(data, cfg);
  const auto train_scores = model.score(data);
  for (int i = 0; i < 3; ++i) CHECK(train_scores[i] > 0.5);
  for (int i = 3; i < 6; ++i) CHECK(train_scores[i] < 0.5);

  // Scoring values far outside the training range reuses the stored edges:
  // they clamp into the outer bins instead of being rebinned.
  std::vector<Column> probe_cols(3);
  probe_cols[0].numeric = {-100.0, 100.0};
  probe_cols[1].categorical = {"1", "0"};
  probe_cols[2].categorical = {"1", "0"};
  Dataset probe(s, {0, 1}, probe_cols);
  const auto probe_scores = model.score(probe);
  CHECK(probe_scores[0] > 0.5);
  CHECK(probe_scores[1] < 0.5);
}

TEST_CASE("encoder one hot layout and unseen level warning") {
  auto data = gradcheck_dataset();
  FeatureEncoder enc(data);
  // c0 has levels a, b, c and v0 is standardized: dim = 1 + 3.
  CHECK(enc.dim() == 4);
  const auto m = enc.encode(data);
  // Row 0: v0 = 0.2 standardized, c0 = "a" -> block (1, 0, 0).
  CHECK(m[1] == 1.0);
  CHECK(m[2] == 0.0);
  CHECK(m[3] == 0.0);
  // Row 1: c0 = "b".
  CHECK(m[4 + 1] == 0.0);
  CHECK(m[4 + 2] == 1.0);

  double mean = 0;
  const auto& v0 = data.numeric(0);
  for (double v : v0) mean += v;
  mean /= static_cast<double>(v0.size());
  double var = 0;
  for (double v : v0) var += (v - mean) * (v - mean);
  var /= static_cast<double>(v0.size());
  CHECK(std::abs(m[0] - (v0[0] - mean) / std::sqrt(var)) <= 1e-12);

  // Unseen level -> all-zero block plus a warning naming column and level.
  std::vector<Column> cols(4);
  cols[0].numeric = {0.0};
  cols[1].categorical = {"mystery"};
  cols[2].categorical = {"1"};
  cols[3].categorical = {"1"};
  Dataset probe(data.schema(), {0}, cols);
  WarningLog warnings;
  const auto pm = enc.encode(probe, &warnings);
  CHECK(pm[1] == 0.0);
  CHECK(pm[2] == 0.0);
  CHECK(pm[3] == 0.0);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("c0") != std::string::npos);
  CHECK(warnings[0].find("mystery") != std::string::npos);
}

TEST_CASE("trainer dispatch covers every kind") {
  GeneratorConfig g;
  g.n_rows = 80;
  g.seed = 21;
  auto data = generate_synthetic(g);

  for (const char* name : {"naive_bayes", "logistic", "prejudice_remover", "adversarial"}) {
    TrainerSpec spec;
    spec.kind = parse_trainer_kind(name);
    spec.logistic.epochs = 20;
    spec.adversarial.epochs = 20;
    auto model = train_model(data, spec);
    REQUIRE(model != nullptr);
    CHECK(std::string(to_string(spec.kind)) == name);
    const auto scores = model->score(data);
    REQUIRE(scores.size() == data.n_rows());
    for (double v : scores) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    // Every model serializes to parseable JSON carrying its kind.
    auto j = nlohmann::json::parse(model->to_json());
    CHECK(j["kind"] == name);
  }
  CHECK_THROWS_AS(parse_trainer_kind("boosted_trees"), Error);
}

TEST_CASE("model json round trips weights") {
  auto data = gradcheck_dataset();
  LogisticConfig cfg;
  cfg.epochs = 30;
  auto model = LogisticModel::fit(data, cfg);
  auto j = nlohmann::json::parse(model.to_json());
  const auto w = j["weights"].get<std::vector<double>>();
  REQUIRE(w.size() == model.weights().size());
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(w[i] == model.weights()[i]);
}
