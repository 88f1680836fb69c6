#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fairkit {

enum class Errc {
  missing_column,
  unknown_column,
  type_mismatch,
  empty_file,
  duplicate_header,
  invalid_config,
  domain_too_large,
  numeric_column_selected,
  empty_group,
  single_class_dataset,
  single_group_dataset,
  k_too_large,
  degenerate_feature,
  length_mismatch,
  empty_input,
  infeasible,
  unmapped_cell,
  cell_too_small,
  non_finite_loss,
  encoding_mismatch,
  fewer_than_two_classifiers,
  row_id_mismatch,
  config_parse,
  stage_failure,
  io_error,
  internal,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Non-fatal diagnostics (clamped parameters, excluded columns, unseen levels).
// Callers that do not care pass nullptr.
using WarningLog = std::vector<std::string>;

inline void warn(WarningLog* log, const std::string& message) {
  if (log != nullptr) log->push_back(message);
}

}  // namespace fairkit
