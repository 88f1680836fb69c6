#pragma once

#include <string>

#include "fairkit/dataset.hpp"
#include "fairkit/schema.hpp"

namespace fairkit {

// RFC 4180 CSV with header. The header must contain every schema column (any
// order); an optional "__synthetic" column is read into provenance flags.
// row_id is the 0-based data line index.
Dataset load_csv(const std::string& path, const Schema& schema);
Dataset parse_csv_text(const std::string& text, const Schema& schema);

// Writes columns in schema order, quoting per RFC 4180. Numeric cells use the
// shortest round-trip representation. A "__synthetic" column is appended when
// the dataset carries provenance flags.
void write_csv(const std::string& path, const Dataset& data);
std::string csv_to_text(const Dataset& data);

}  // namespace fairkit
