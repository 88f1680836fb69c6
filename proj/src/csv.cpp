#include "fairkit/csv.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "fairkit/error.hpp"

namespace fairkit {

namespace {

// Splits RFC 4180 content into records of fields. Quoted fields may contain
// commas, newlines, and doubled quotes.
std::vector<std::vector<std::string>> tokenize(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool any_char = false;
  std::size_t i = 0;
  auto end_field = [&] {
    fields.push_back(cur);
    cur.clear();
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(fields));
    fields.clear();
    any_char = false;
  };
  while (i < text.size()) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cur += '"';
          i += 2;
        } else {
          quoted = false;
          ++i;
        }
      } else {
        cur += c;
        ++i;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        any_char = true;
        ++i;
        break;
      case ',':
        end_field();
        any_char = true;
        ++i;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        [[fallthrough]];
      case '\n':
        end_record();
        ++i;
        break;
      default:
        cur += c;
        any_char = true;
        ++i;
        break;
    }
  }
  if (any_char || !cur.empty() || !fields.empty()) end_record();
  return records;
}

bool parse_double(const std::string& s, double* out) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + s.size()) return false;
  *out = v;
  return true;
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string quote(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

Dataset parse_csv_text(const std::string& text, const Schema& schema) {
  schema.validate();
  auto records = tokenize(text);
  if (records.empty()) throw Error(Errc::empty_file, "CSV has no header line");
  const auto& header = records[0];
  std::set<std::string> seen;
  for (const auto& name : header)
    if (!seen.insert(name).second)
      throw Error(Errc::duplicate_header, "header repeats column '" + name + "'");

  // Map each schema column to its position in the file.
  std::vector<std::size_t> file_pos(schema.columns.size());
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const auto& name = schema.columns[c].name;
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw Error(Errc::missing_column, "CSV header lacks column '" + name + "'");
    file_pos[c] = static_cast<std::size_t>(it - header.begin());
  }
  std::ptrdiff_t synth_pos = -1;
  {
    auto it = std::find(header.begin(), header.end(), "__synthetic");
    if (it != header.end()) synth_pos = it - header.begin();
  }

  const std::size_t n = records.size() - 1;
  std::vector<std::int64_t> row_ids(n);
  std::vector<Column> cols(schema.columns.size());
  std::vector<std::uint8_t> synth;
  if (synth_pos >= 0) synth.resize(n);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (schema.columns[c].kind == ColumnKind::numeric) cols[c].numeric.reserve(n);
    else cols[c].categorical.reserve(n);
  }

  for (std::size_t r = 0; r < n; ++r) {
    const auto& rec = records[r + 1];
    if (rec.size() != header.size())
      throw Error(Errc::type_mismatch, "row " + std::to_string(r) + " has " +
                                           std::to_string(rec.size()) + " fields, header has " +
                                           std::to_string(header.size()));
    row_ids[r] = static_cast<std::int64_t>(r);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::string& raw = rec[file_pos[c]];
      if (schema.columns[c].kind == ColumnKind::numeric) {
        double v;
        if (!parse_double(raw, &v))
          throw Error(Errc::type_mismatch, "row " + std::to_string(r) + ", column '" +
                                               schema.columns[c].name +
                                               "': not numeric: '" + raw + "'");
        cols[c].numeric.push_back(v);
      } else {
        if (raw.empty())
          throw Error(Errc::type_mismatch, "row " + std::to_string(r) + ", column '" +
                                               schema.columns[c].name + "': empty value");
        cols[c].categorical.push_back(raw);
      }
    }
    if (synth_pos >= 0) {
      const std::string& raw = rec[static_cast<std::size_t>(synth_pos)];
      if (raw != "0" && raw != "1")
        throw Error(Errc::type_mismatch,
                    "row " + std::to_string(r) + ", column '__synthetic': expected 0 or 1");
      synth[r] = raw == "1" ? 1 : 0;
    }
  }
  Dataset data(schema, std::move(row_ids), std::move(cols), std::move(synth));
  // Ingested data must carry both label values and both protected values;
  // derived in-memory datasets (per-cell views and the like) may not.
  for (std::size_t c : {schema.label_index(), schema.protected_index()}) {
    const std::size_t observed = data.observed_values(c).size();
    if (observed != 2)
      throw Error(Errc::invalid_config, "column '" + schema.columns[c].name + "' has " +
                                            std::to_string(observed) +
                                            " observed values; exactly 2 required");
  }
  return data;
}

Dataset load_csv(const std::string& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open CSV file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv_text(buf.str(), schema);
}

std::string csv_to_text(const Dataset& data) {
  std::ostringstream out;
  const auto& schema = data.schema();
  for (std::size_t c = 0; c < data.n_cols(); ++c) {
    if (c) out << ',';
    out << quote(schema.columns[c].name);
  }
  if (data.has_synthetic_flags()) out << ",__synthetic";
  out << '\n';
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    for (std::size_t c = 0; c < data.n_cols(); ++c) {
      if (c) out << ',';
      out << quote(data.value_as_string(r, c));
    }
    if (data.has_synthetic_flags()) out << ',' << (data.synthetic_flags()[r] ? '1' : '0');
    out << '\n';
  }
  return out.str();
}

void write_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write CSV file '" + path + "'");
  out << csv_to_text(data);
}

}  // namespace fairkit
