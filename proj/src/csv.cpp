#include "panelscope/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "panelscope/error.hpp"

namespace panelscope {

namespace {

bool parse_int(std::string_view s, std::int64_t& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_real(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_bool(std::string_view s, bool& out) {
  if (s == "true" || s == "TRUE" || s == "True") {
    out = true;
    return true;
  }
  if (s == "false" || s == "FALSE" || s == "False") {
    out = false;
    return true;
  }
  return false;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void append_row(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += quote(fields[i]);
  }
  out += '\n';
}

}  // namespace

DelimitedText parse_delimited(std::string_view text, char delimiter) {
  DelimitedText out;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t record_line = 1;
  std::size_t quote_line = 0;

  auto finish_record = [&]() {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
    const bool blank = record.size() == 1 && record.front().empty();
    if (!blank) {
      if (out.header.empty() && out.records.empty() && out.lines.empty()) {
        out.header = std::move(record);
      } else {
        if (record.size() != out.header.size()) {
          throw Error(ErrorCode::ParseError,
                      "expected " + std::to_string(out.header.size()) + " fields, found " +
                          std::to_string(record.size()),
                      record_line);
        }
        out.records.push_back(std::move(record));
        out.lines.push_back(record_line);
      }
    }
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
      quote_line = line;
    } else if (c == delimiter) {
      record.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      continue;
    } else if (c == '\n') {
      finish_record();
      ++line;
      record_line = line;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) throw Error(ErrorCode::ParseError, "unterminated quoted field", quote_line);
  if (field_started || !record.empty() || !field.empty()) finish_record();
  if (out.header.empty()) throw Error(ErrorCode::ParseError, "missing header row", 1);
  return out;
}

std::vector<Column> infer_columns(const DelimitedText& data,
                                  const std::vector<std::string>& na_tokens,
                                  const std::vector<std::string>& text_columns) {
  auto is_na = [&](const std::string& s) {
    return std::find(na_tokens.begin(), na_tokens.end(), s) != na_tokens.end();
  };
  std::vector<Column> columns;
  for (std::size_t c = 0; c < data.header.size(); ++c) {
    Column col{data.header[c], ColumnType::Integer, {}};
    const bool forced_text =
        std::find(text_columns.begin(), text_columns.end(), col.name) != text_columns.end();
    bool all_int = true, all_real = true, all_bool = true;
    for (const auto& rec : data.records) {
      const auto& tok = rec[c];
      if (is_na(tok)) continue;
      std::int64_t i;
      double d;
      bool b;
      all_int = all_int && parse_int(tok, i);
      all_real = all_real && parse_real(tok, d);
      all_bool = all_bool && parse_bool(tok, b);
    }
    if (forced_text) {
      col.type = ColumnType::Text;
    } else if (all_int) {
      col.type = ColumnType::Integer;
    } else if (all_real) {
      col.type = ColumnType::Real;
    } else if (all_bool) {
      col.type = ColumnType::Boolean;
    } else {
      col.type = ColumnType::Text;
    }
    col.cells.reserve(data.records.size());
    for (const auto& rec : data.records) {
      const auto& tok = rec[c];
      if (is_na(tok)) {
        col.cells.emplace_back();
        continue;
      }
      switch (col.type) {
        case ColumnType::Integer: {
          std::int64_t i = 0;
          parse_int(tok, i);
          col.cells.emplace_back(i);
          break;
        }
        case ColumnType::Real: {
          double d = 0;
          parse_real(tok, d);
          col.cells.emplace_back(d);
          break;
        }
        case ColumnType::Boolean: {
          bool b = false;
          parse_bool(tok, b);
          col.cells.emplace_back(b);
          break;
        }
        case ColumnType::Text: col.cells.emplace_back(tok); break;
      }
    }
    columns.push_back(std::move(col));
  }
  return columns;
}

std::string read_text(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

PanelTable parse_panel_csv(std::string_view text, const IngestConfig& config) {
  const auto data = parse_delimited(text, config.delimiter);
  if (data.records.empty()) throw Error(ErrorCode::EmptyTable, "no data rows", 1);
  auto columns = infer_columns(data, config.na_tokens, {config.key_col});
  try {
    return build_panel(std::move(columns), {config.key_col, config.index_col, config.regular});
  } catch (const Error& e) {
    if (e.record() && *e.record() < data.lines.size()) throw e.at_line(data.lines[*e.record()]);
    throw;
  }
}

PanelTable read_panel_csv(const IngestConfig& config) {
  return parse_panel_csv(read_text(config.path), config);
}

FeatureTable parse_feature_csv(std::string_view text, char delimiter,
                               const std::vector<std::string>& na_tokens) {
  const auto data = parse_delimited(text, delimiter);
  auto columns = infer_columns(data, na_tokens, {data.header.front()});
  std::vector<std::string> keys;
  for (const auto& c : columns.front().cells) {
    if (is_missing(c)) throw Error(ErrorCode::ParseError, "feature table has a missing key");
    keys.push_back(std::get<std::string>(c));
  }
  FeatureTable out(columns.front().name, std::move(keys));
  for (std::size_t i = 1; i < columns.size(); ++i) out.add_column(std::move(columns[i]));
  return out;
}

FeatureTable read_feature_csv(const std::filesystem::path& path, char delimiter,
                              const std::vector<std::string>& na_tokens) {
  return parse_feature_csv(read_text(path), delimiter, na_tokens);
}

KeyAllocation parse_allocation_csv(std::string_view text) {
  const auto data = parse_delimited(text, ',');
  if (data.header.size() != 2) {
    throw Error(ErrorCode::ParseError, "allocation needs exactly two columns (key, facet)", 1);
  }
  KeyAllocation alloc;
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    std::int64_t facet = 0;
    if (!parse_int(data.records[i][1], facet) || facet < 1) {
      throw Error(ErrorCode::ParseError, "facet must be a positive integer", data.lines[i]);
    }
    alloc.assignments.push_back({data.records[i][0], static_cast<int>(facet)});
    alloc.n_facets = std::max(alloc.n_facets, static_cast<int>(facet));
  }
  return alloc;
}

KeyAllocation read_allocation_csv(const std::filesystem::path& path) {
  return parse_allocation_csv(read_text(path));
}

std::string to_csv(const FeatureTable& table) {
  std::string out;
  append_row(out, table.column_names());
  std::vector<std::string> fields;
  for (std::size_t r = 0; r < table.size(); ++r) {
    fields.clear();
    fields.push_back(table.keys()[r]);
    for (const auto& c : table.columns()) fields.push_back(format_cell(c.cells[r]));
    append_row(out, fields);
  }
  return out;
}

std::string to_csv(const PanelTable& table) {
  std::string out;
  append_row(out, table.column_names());
  std::vector<std::string> fields;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    fields.clear();
    fields.push_back(table.keys()[r]);
    fields.push_back(format_cell(table.cell(table.index_column(), r)));
    for (const auto& c : table.columns()) fields.push_back(format_cell(c.cells[r]));
    append_row(out, fields);
  }
  return out;
}

std::string to_csv(const NearestKeys& rows, std::string_view key_name,
                   std::string_view value_name) {
  std::string out;
  append_row(out, {std::string(key_name), std::string(value_name), "stat", "stat_value",
                   "stat_diff"});
  for (const auto& r : rows) {
    append_row(out, {r.key, format_real(r.value), r.stat, format_real(r.stat_value),
                     format_real(r.stat_diff)});
  }
  return out;
}

std::string to_csv(const KeyAllocation& alloc) {
  std::string out;
  append_row(out, {"key", "facet"});
  for (const auto& a : alloc.assignments) append_row(out, {a.key, std::to_string(a.facet)});
  return out;
}

}  // namespace panelscope
