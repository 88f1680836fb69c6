#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fairkit/dataset.hpp"
#include "fairkit/error.hpp"

namespace fairkit {

// A trained scorer. score() returns one value in [0,1] per row; the default
// decision rule is score >= 0.5 unless a post-processor overrides it.
class Model {
 public:
  virtual ~Model() = default;
  virtual std::vector<double> score(const Dataset& data, WarningLog* warnings = nullptr) const = 0;
  virtual std::string to_json() const = 0;
  virtual const char* kind() const = 0;
};

inline std::vector<int> threshold_decisions(const std::vector<double>& scores) {
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= 0.5 ? 1 : 0;
  return out;
}

}  // namespace fairkit
