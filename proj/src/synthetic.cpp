#include "fairkit/synthetic.hpp"

#include "fairkit/error.hpp"
#include "fairkit/rng.hpp"

namespace fairkit {

Dataset generate_synthetic(const GeneratorConfig& config) {
  auto check_prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
      throw Error(Errc::invalid_config, std::string(name) + " must be in [0, 1]");
  };
  check_prob(config.base_positive_rate, "base_positive_rate");
  check_prob(config.bias_strength, "bias_strength");
  check_prob(config.proxy_correlation, "proxy_correlation");
  if (config.n_rows < 2) throw Error(Errc::invalid_config, "n_rows must be at least 2");
  if (config.noise_features < 0)
    throw Error(Errc::invalid_config, "noise_features must be non-negative");
  if (config.base_positive_rate - config.bias_strength < 0.0)
    throw Error(Errc::invalid_config,
                "bias_strength exceeds base_positive_rate; unprivileged rate would be negative");

  Schema schema;
  schema.columns.push_back({"proxy", ColumnKind::categorical, ColumnRole::feature});
  for (int f = 0; f < config.noise_features; ++f)
    schema.columns.push_back(
        {"noise" + std::to_string(f), ColumnKind::categorical, ColumnRole::feature});
  schema.columns.push_back({"protected", ColumnKind::categorical, ColumnRole::protected_attr});
  schema.columns.push_back({"label", ColumnKind::categorical, ColumnRole::label});
  schema.favorable_label = "1";
  schema.privileged_value = "1";

  const std::size_t n = config.n_rows;
  std::vector<std::int64_t> row_ids(n);
  std::vector<Column> cols(schema.columns.size());
  for (auto& col : cols) col.categorical.reserve(n);
  const std::size_t proxy_col = 0;
  const std::size_t prot_col = cols.size() - 2;
  const std::size_t label_col = cols.size() - 1;

  Rng rng(config.seed);
  for (std::size_t i = 0; i < n; ++i) {
    row_ids[i] = static_cast<std::int64_t>(i);
    const bool privileged = rng.bernoulli(0.5);
    const bool proxy_copies = rng.bernoulli(config.proxy_correlation);
    const bool proxy = proxy_copies ? privileged : !privileged;
    const double p_pos =
        privileged ? config.base_positive_rate : config.base_positive_rate - config.bias_strength;
    const bool positive = rng.bernoulli(p_pos);
    cols[proxy_col].categorical.push_back(proxy ? "1" : "0");
    for (int f = 0; f < config.noise_features; ++f)
      cols[1 + f].categorical.push_back(rng.bernoulli(0.5) ? "1" : "0");
    cols[prot_col].categorical.push_back(privileged ? "1" : "0");
    cols[label_col].categorical.push_back(positive ? "1" : "0");
  }
  return Dataset(std::move(schema), std::move(row_ids), std::move(cols));
}

}  // namespace fairkit
