#pragma once

#include <cstdint>

#include "fairkit/dataset.hpp"

namespace fairkit {

// Biased-data generator with a controllable proxy feature. The protected
// value is drawn fair-coin; "proxy" copies it with probability
// proxy_correlation (flipped otherwise), so the proxy leaks group membership
// into the feature set; the favorable-label probability drops by
// bias_strength for the unprivileged group.
struct GeneratorConfig {
  std::size_t n_rows = 1000;
  double base_positive_rate = 0.6;
  double bias_strength = 0.3;       // drop in favorable-label probability, unprivileged group
  double proxy_correlation = 0.8;   // probability the proxy equals the protected value
  int noise_features = 2;           // i.i.d. uniform binary categorical columns
  std::uint64_t seed = 0;
};

// Columns: proxy, noise0..noiseK (features), protected, label. Values are
// "0"/"1"; privileged = "1", favorable = "1". Identical config and seed give
// an identical dataset byte-for-byte.
Dataset generate_synthetic(const GeneratorConfig& config);

}  // namespace fairkit
