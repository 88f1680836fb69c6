#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairkit/dataset.hpp"

namespace fairkit {

// Empirical probability table over (x, y, z) on finite domains, where x is
// the joint value of the selected categorical feature columns. Counts are
// kept so cell frequencies are recoverable exactly.
struct JointDistribution {
  std::vector<std::string> feature_columns;
  std::vector<std::vector<std::string>> feature_domains;  // per column, sorted
  std::vector<std::string> label_domain;                  // sorted, size 2
  std::vector<std::string> protected_domain;              // sorted, size 2

  // Flat tables indexed cell = (x * ny + y) * nz + z, x the mixed-radix index
  // over feature_domains.
  std::vector<std::int64_t> counts;
  std::vector<double> prob;
  std::int64_t total = 0;

  std::size_t nx() const;
  std::size_t ny() const { return label_domain.size(); }
  std::size_t nz() const { return protected_domain.size(); }
  std::size_t cell_index(std::size_t x, std::size_t y, std::size_t z) const;

  // Mixed-radix feature index of one row of categorical values, and back.
  std::size_t x_index(const std::vector<std::string>& values) const;
  std::vector<std::string> x_values(std::size_t x) const;

  double marginal_xy(std::size_t x, std::size_t y) const;  // sum over z
  double marginal_z(std::size_t z) const;
  double marginal_y(std::size_t y) const;
};

// The selected columns must be categorical; the feature domain product is
// capped (DomainTooLarge beyond it).
JointDistribution empirical_joint(const Dataset& data,
                                  const std::vector<std::string>& feature_subset,
                                  std::size_t domain_cap = 4096);

// Builds a distribution directly from a count table; used for hand-specified
// instances. counts is indexed like JointDistribution::counts.
JointDistribution joint_from_counts(std::vector<std::vector<std::string>> feature_domains,
                                    std::vector<std::string> label_domain,
                                    std::vector<std::string> protected_domain,
                                    std::vector<std::int64_t> counts,
                                    std::vector<std::string> feature_columns = {});

}  // namespace fairkit
