#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "panelscope/feature_table.hpp"
#include "panelscope/nearness.hpp"
#include "panelscope/panel.hpp"
#include "panelscope/sampling.hpp"

namespace panelscope {

struct IngestConfig {
  std::filesystem::path path;
  std::string key_col;
  std::string index_col;
  bool regular = true;
  char delimiter = ',';
  std::vector<std::string> na_tokens{"", "NA"};
};

/// Delimited text split into fields. `lines[i]` is the 1-based file line on
/// which record i starts (the header is line 1).
struct DelimitedText {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> lines;
};

/// RFC 4180 style reader: quoted fields may contain the delimiter, doubled
/// quotes and line breaks; CRLF is accepted. Throws ParseError with the line
/// of an unterminated quote or a record of the wrong width.
DelimitedText parse_delimited(std::string_view text, char delimiter = ',');

/// Column typing: every non-NA token an integer -> Integer, else a number ->
/// Real, else true/false -> Boolean, else Text. Columns named in `text_columns`
/// stay Text.
std::vector<Column> infer_columns(const DelimitedText& data,
                                  const std::vector<std::string>& na_tokens,
                                  const std::vector<std::string>& text_columns = {});

/// Throws FileNotFound, ParseError, EmptyTable, and build_panel errors with the
/// offending line attached.
PanelTable read_panel_csv(const IngestConfig& config);
PanelTable parse_panel_csv(std::string_view text, const IngestConfig& config);

/// First column is the key.
FeatureTable read_feature_csv(const std::filesystem::path& path, char delimiter = ',',
                              const std::vector<std::string>& na_tokens = {"", "NA"});
FeatureTable parse_feature_csv(std::string_view text, char delimiter = ',',
                               const std::vector<std::string>& na_tokens = {"", "NA"});

/// Two columns: key, facet.
KeyAllocation read_allocation_csv(const std::filesystem::path& path);
KeyAllocation parse_allocation_csv(std::string_view text);

std::string to_csv(const FeatureTable& table);
std::string to_csv(const PanelTable& table);
std::string to_csv(const NearestKeys& rows, std::string_view key_name = "key",
                   std::string_view value_name = "value");
std::string to_csv(const KeyAllocation& alloc);

/// Writes `contents` to `path`; throws IoError.
void write_text(const std::filesystem::path& path, std::string_view contents);

template <typename T>
void write_table_csv(const T& table, const std::filesystem::path& path) {
  write_text(path, to_csv(table));
}

std::string read_text(const std::filesystem::path& path);

}  // namespace panelscope
