#include "fairkit/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "vendor/json.hpp"

namespace fairkit {

FeatureEncoder::FeatureEncoder(const Dataset& train, bool include_protected) {
  auto cols = train.schema().feature_indices();
  if (include_protected) cols.push_back(train.schema().protected_index());
  for (std::size_t c : cols) {
    ColumnCodec codec;
    codec.name = train.schema().columns[c].name;
    codec.kind = train.schema().columns[c].kind;
    if (codec.kind == ColumnKind::numeric) {
      const auto& vals = train.numeric(c);
      codec.mean = std::accumulate(vals.begin(), vals.end(), 0.0) /
                   static_cast<double>(vals.size());
      double var = 0;
      for (double v : vals) var += (v - codec.mean) * (v - codec.mean);
      var /= static_cast<double>(vals.size());
      codec.std = var > 0.0 ? std::sqrt(var) : 1.0;
      dim_ += 1;
    } else {
      codec.levels = train.observed_values(c);
      dim_ += codec.levels.size();
    }
    codecs_.push_back(std::move(codec));
  }
  if (dim_ == 0) throw Error(Errc::empty_input, "training data has no feature columns");
}

std::vector<double> FeatureEncoder::encode(const Dataset& data, WarningLog* warnings) const {
  const std::size_t n = data.n_rows();
  std::vector<double> out(n * dim_, 0.0);
  std::set<std::string> warned;
  std::size_t offset = 0;
  for (const auto& codec : codecs_) {
    std::size_t c = data.schema().index_of(codec.name);
    if (data.schema().columns[c].kind != codec.kind)
      throw Error(Errc::encoding_mismatch,
                  "column '" + codec.name + "' changed kind since the encoder was fit");
    if (codec.kind == ColumnKind::numeric) {
      const auto& vals = data.numeric(c);
      for (std::size_t r = 0; r < n; ++r)
        out[r * dim_ + offset] = (vals[r] - codec.mean) / codec.std;
      offset += 1;
    } else {
      const auto& vals = data.categorical(c);
      for (std::size_t r = 0; r < n; ++r) {
        auto it = std::lower_bound(codec.levels.begin(), codec.levels.end(), vals[r]);
        if (it != codec.levels.end() && *it == vals[r]) {
          out[r * dim_ + offset + static_cast<std::size_t>(it - codec.levels.begin())] = 1.0;
        } else if (warned.insert(codec.name + "=" + vals[r]).second) {
          warn(warnings, "column '" + codec.name + "': level '" + vals[r] +
                             "' unseen at fit time; encoded as all-zero");
        }
      }
      offset += codec.levels.size();
    }
  }
  return out;
}

std::string FeatureEncoder::to_json() const {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& codec : codecs_) {
    nlohmann::json j;
    j["column"] = codec.name;
    if (codec.kind == ColumnKind::numeric) {
      j["kind"] = "numeric";
      j["mean"] = codec.mean;
      j["std"] = codec.std;
    } else {
      j["kind"] = "categorical";
      j["levels"] = codec.levels;
    }
    cols.push_back(std::move(j));
  }
  nlohmann::json j;
  j["columns"] = std::move(cols);
  j["dim"] = dim_;
  return j.dump(2);
}

}  // namespace fairkit
