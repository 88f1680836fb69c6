#include "fairkit/joint.hpp"

#include <algorithm>

#include "fairkit/error.hpp"

namespace fairkit {

std::size_t JointDistribution::nx() const {
  std::size_t n = 1;
  for (const auto& dom : feature_domains) n *= dom.size();
  return n;
}

std::size_t JointDistribution::cell_index(std::size_t x, std::size_t y, std::size_t z) const {
  return (x * ny() + y) * nz() + z;
}

std::size_t JointDistribution::x_index(const std::vector<std::string>& values) const {
  if (values.size() != feature_domains.size())
    throw Error(Errc::length_mismatch, "feature value count does not match domain count");
  std::size_t x = 0;
  for (std::size_t c = 0; c < values.size(); ++c) {
    const auto& dom = feature_domains[c];
    auto it = std::lower_bound(dom.begin(), dom.end(), values[c]);
    if (it == dom.end() || *it != values[c])
      throw Error(Errc::unmapped_cell, "value '" + values[c] + "' not in domain of '" +
                                           (c < feature_columns.size() ? feature_columns[c]
                                                                       : std::to_string(c)) +
                                           "'");
    x = x * dom.size() + static_cast<std::size_t>(it - dom.begin());
  }
  return x;
}

std::vector<std::string> JointDistribution::x_values(std::size_t x) const {
  std::vector<std::string> out(feature_domains.size());
  for (std::size_t c = feature_domains.size(); c-- > 0;) {
    const auto& dom = feature_domains[c];
    out[c] = dom[x % dom.size()];
    x /= dom.size();
  }
  return out;
}

double JointDistribution::marginal_xy(std::size_t x, std::size_t y) const {
  double s = 0;
  for (std::size_t z = 0; z < nz(); ++z) s += prob[cell_index(x, y, z)];
  return s;
}

double JointDistribution::marginal_z(std::size_t z) const {
  double s = 0;
  for (std::size_t x = 0; x < nx(); ++x)
    for (std::size_t y = 0; y < ny(); ++y) s += prob[cell_index(x, y, z)];
  return s;
}

double JointDistribution::marginal_y(std::size_t y) const {
  double s = 0;
  for (std::size_t x = 0; x < nx(); ++x)
    for (std::size_t z = 0; z < nz(); ++z) s += prob[cell_index(x, y, z)];
  return s;
}

JointDistribution empirical_joint(const Dataset& data,
                                  const std::vector<std::string>& feature_subset,
                                  std::size_t domain_cap) {
  if (data.n_rows() == 0) throw Error(Errc::empty_input, "dataset has no rows");
  JointDistribution joint;
  joint.feature_columns = feature_subset;
  std::vector<std::size_t> col_idx;
  for (const auto& name : feature_subset) {
    std::size_t c = data.schema().index_of(name);
    if (data.schema().columns[c].kind == ColumnKind::numeric)
      throw Error(Errc::numeric_column_selected,
                  "column '" + name + "' is numeric; bin it before building a joint table");
    col_idx.push_back(c);
  }
  std::size_t nx = 1;
  for (auto c : col_idx) {
    joint.feature_domains.push_back(data.observed_values(c));
    nx *= joint.feature_domains.back().size();
    if (nx > domain_cap)
      throw Error(Errc::domain_too_large, "feature domain product exceeds cap of " +
                                              std::to_string(domain_cap));
  }
  joint.label_domain = data.observed_values(data.schema().label_index());
  joint.protected_domain = data.observed_values(data.schema().protected_index());

  joint.counts.assign(nx * joint.ny() * joint.nz(), 0);
  const auto& labels = data.label_values();
  const auto& groups = data.protected_values();
  std::vector<std::string> vals(col_idx.size());
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    for (std::size_t c = 0; c < col_idx.size(); ++c)
      vals[c] = data.categorical(col_idx[c])[r];
    std::size_t x = joint.x_index(vals);
    auto find = [](const std::vector<std::string>& dom, const std::string& v) {
      return static_cast<std::size_t>(
          std::lower_bound(dom.begin(), dom.end(), v) - dom.begin());
    };
    std::size_t y = find(joint.label_domain, labels[r]);
    std::size_t z = find(joint.protected_domain, groups[r]);
    ++joint.counts[joint.cell_index(x, y, z)];
  }
  joint.total = static_cast<std::int64_t>(data.n_rows());
  joint.prob.resize(joint.counts.size());
  for (std::size_t i = 0; i < joint.counts.size(); ++i)
    joint.prob[i] = static_cast<double>(joint.counts[i]) / static_cast<double>(joint.total);
  return joint;
}

JointDistribution joint_from_counts(std::vector<std::vector<std::string>> feature_domains,
                                    std::vector<std::string> label_domain,
                                    std::vector<std::string> protected_domain,
                                    std::vector<std::int64_t> counts,
                                    std::vector<std::string> feature_columns) {
  JointDistribution joint;
  joint.feature_domains = std::move(feature_domains);
  joint.label_domain = std::move(label_domain);
  joint.protected_domain = std::move(protected_domain);
  joint.feature_columns = std::move(feature_columns);
  if (joint.feature_columns.empty())
    for (std::size_t c = 0; c < joint.feature_domains.size(); ++c)
      joint.feature_columns.push_back("x" + std::to_string(c));
  const std::size_t want = joint.nx() * joint.ny() * joint.nz();
  if (counts.size() != want)
    throw Error(Errc::length_mismatch, "count table has " + std::to_string(counts.size()) +
                                           " cells, domains imply " + std::to_string(want));
  joint.counts = std::move(counts);
  joint.total = 0;
  for (auto c : joint.counts) {
    if (c < 0) throw Error(Errc::invalid_config, "negative cell count");
    joint.total += c;
  }
  if (joint.total == 0) throw Error(Errc::empty_input, "count table is all zero");
  joint.prob.resize(joint.counts.size());
  for (std::size_t i = 0; i < joint.counts.size(); ++i)
    joint.prob[i] = static_cast<double>(joint.counts[i]) / static_cast<double>(joint.total);
  return joint;
}

}  // namespace fairkit
