#include "fairkit/schema.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "fairkit/error.hpp"

namespace fairkit {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::missing_column: return "MissingColumn";
    case Errc::unknown_column: return "UnknownColumn";
    case Errc::type_mismatch: return "TypeMismatch";
    case Errc::empty_file: return "EmptyFile";
    case Errc::duplicate_header: return "DuplicateHeader";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::domain_too_large: return "DomainTooLarge";
    case Errc::numeric_column_selected: return "NumericColumnSelected";
    case Errc::empty_group: return "EmptyGroup";
    case Errc::single_class_dataset: return "SingleClassDataset";
    case Errc::single_group_dataset: return "SingleGroupDataset";
    case Errc::k_too_large: return "KTooLarge";
    case Errc::degenerate_feature: return "DegenerateFeature";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::empty_input: return "Empty";
    case Errc::infeasible: return "Infeasible";
    case Errc::unmapped_cell: return "UnmappedCell";
    case Errc::cell_too_small: return "CellTooSmall";
    case Errc::non_finite_loss: return "NonFiniteLoss";
    case Errc::encoding_mismatch: return "EncodingMismatch";
    case Errc::fewer_than_two_classifiers: return "FewerThanTwoClassifiers";
    case Errc::row_id_mismatch: return "RowIdMismatch";
    case Errc::config_parse: return "ConfigParse";
    case Errc::stage_failure: return "StageFailure";
    case Errc::io_error: return "IoError";
    case Errc::internal: return "Internal";
  }
  return "Unknown";
}

const char* to_string(ColumnKind kind) {
  return kind == ColumnKind::numeric ? "numeric" : "categorical";
}

const char* to_string(ColumnRole role) {
  switch (role) {
    case ColumnRole::feature: return "feature";
    case ColumnRole::protected_attr: return "protected";
    case ColumnRole::label: return "label";
  }
  return "?";
}

void Schema::validate() const {
  std::set<std::string> names;
  std::size_t n_label = 0, n_protected = 0;
  for (const auto& col : columns) {
    if (col.name.empty()) throw Error(Errc::invalid_config, "schema has an empty column name");
    if (!names.insert(col.name).second)
      throw Error(Errc::invalid_config, "duplicate column name '" + col.name + "'");
    if (col.role == ColumnRole::label) {
      ++n_label;
      if (col.kind != ColumnKind::categorical)
        throw Error(Errc::invalid_config, "label column '" + col.name + "' must be categorical");
    }
    if (col.role == ColumnRole::protected_attr) {
      ++n_protected;
      if (col.kind != ColumnKind::categorical)
        throw Error(Errc::invalid_config,
                    "protected column '" + col.name + "' must be categorical");
    }
  }
  if (n_label != 1)
    throw Error(Errc::invalid_config, "schema needs exactly one label column, found " +
                                          std::to_string(n_label));
  if (n_protected != 1)
    throw Error(Errc::invalid_config, "schema needs exactly one protected column, found " +
                                          std::to_string(n_protected));
  if (favorable_label.empty())
    throw Error(Errc::invalid_config, "schema does not declare a favorable label value");
  if (privileged_value.empty())
    throw Error(Errc::invalid_config, "schema does not declare a privileged value");
}

std::size_t Schema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == name) return i;
  throw Error(Errc::missing_column, "no column named '" + name + "'");
}

bool Schema::has_column(const std::string& name) const {
  for (const auto& col : columns)
    if (col.name == name) return true;
  return false;
}

std::size_t Schema::label_index() const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].role == ColumnRole::label) return i;
  throw Error(Errc::invalid_config, "schema has no label column");
}

std::size_t Schema::protected_index() const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].role == ColumnRole::protected_attr) return i;
  throw Error(Errc::invalid_config, "schema has no protected column");
}

std::vector<std::size_t> Schema::feature_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].role == ColumnRole::feature) out.push_back(i);
  return out;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

Schema parse_schema_text(const std::string& text) {
  Schema schema;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    if (toks[0] == "favorable") {
      if (toks.size() != 2)
        throw Error(Errc::config_parse,
                    "schema line " + std::to_string(line_no) + ": favorable takes one value");
      schema.favorable_label = toks[1];
      continue;
    }
    if (toks[0] == "privileged") {
      if (toks.size() != 2)
        throw Error(Errc::config_parse,
                    "schema line " + std::to_string(line_no) + ": privileged takes one value");
      schema.privileged_value = toks[1];
      continue;
    }
    if (toks.size() != 3)
      throw Error(Errc::config_parse, "schema line " + std::to_string(line_no) +
                                          ": expected 'name kind role'");
    ColumnSpec col;
    col.name = toks[0];
    if (toks[1] == "numeric") col.kind = ColumnKind::numeric;
    else if (toks[1] == "categorical") col.kind = ColumnKind::categorical;
    else
      throw Error(Errc::config_parse, "schema line " + std::to_string(line_no) +
                                          ": unknown kind '" + toks[1] + "'");
    if (toks[2] == "feature") col.role = ColumnRole::feature;
    else if (toks[2] == "protected") col.role = ColumnRole::protected_attr;
    else if (toks[2] == "label") col.role = ColumnRole::label;
    else
      throw Error(Errc::config_parse, "schema line " + std::to_string(line_no) +
                                          ": unknown role '" + toks[2] + "'");
    schema.columns.push_back(std::move(col));
  }
  schema.validate();
  return schema;
}

Schema load_schema(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open schema file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_schema_text(buf.str());
}

std::string schema_to_text(const Schema& schema) {
  std::ostringstream out;
  for (const auto& col : schema.columns)
    out << col.name << ' ' << to_string(col.kind) << ' ' << to_string(col.role) << '\n';
  out << "favorable " << schema.favorable_label << '\n';
  out << "privileged " << schema.privileged_value << '\n';
  return out.str();
}

}  // namespace fairkit
