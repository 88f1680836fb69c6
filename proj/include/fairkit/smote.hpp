#pragma once

#include <cstdint>
#include <string>

#include "fairkit/dataset.hpp"
#include "fairkit/error.hpp"

namespace fairkit {

// Adds `count` synthetic rows to the (protected value, label value) cell by
// segment interpolation between a cell member and one of its k nearest
// in-cell neighbors: numeric coordinates move to base + u * (neighbor - base)
// with u uniform in [0,1]; categorical values are copied from the base row.
// Synthetic rows get fresh row_ids above all existing ones and are flagged in
// provenance metadata. k is clamped to cell size - 1 with a warning.
Dataset smote_augment(const Dataset& data, std::size_t k, const std::string& protected_value,
                      const std::string& label_value, std::size_t count, std::uint64_t seed,
                      WarningLog* warnings = nullptr);

}  // namespace fairkit
