#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "panelscope/feature_table.hpp"
#include "panelscope/value.hpp"

namespace panelscope {

struct PanelSchema {
  std::string key_col;
  std::string index_col;
  bool regular = true;
};

/// Contiguous run of rows sharing one key, [begin, end) in storage order.
struct KeyGroup {
  std::string key;
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
};

/// Long-format longitudinal table.
///
/// Rows are stored sorted by (key, index) and every (key, index) pair is
/// unique. Keys are compared as exact strings. Key and index cells are never
/// missing; measurement cells may be. Instances are immutable: every
/// transformation returns a new table.
class PanelTable {
 public:
  const std::string& key_column() const noexcept { return schema_.key_col; }
  const std::string& index_column() const noexcept { return schema_.index_col; }
  bool regular() const noexcept { return schema_.regular; }
  const PanelSchema& schema() const noexcept { return schema_; }
  ColumnType index_type() const noexcept { return index_type_; }

  std::size_t rows() const noexcept { return keys_.size(); }
  bool empty() const noexcept { return keys_.empty(); }
  std::size_t n_keys() const noexcept { return groups_.size(); }
  std::span<const KeyGroup> groups() const noexcept { return groups_; }
  const KeyGroup* find_key(std::string_view key) const noexcept;

  /// Per-row key and index.
  const std::vector<std::string>& keys() const noexcept { return keys_; }
  const std::vector<double>& index() const noexcept { return index_; }

  /// Measurement columns, excluding key and index.
  const std::vector<Column>& columns() const noexcept { return columns_; }
  /// Key, index, then measurement column names.
  std::vector<std::string> column_names() const;
  bool has_column(std::string_view name) const noexcept;
  /// Measurement column; throws UnknownColumn (also for the key and index).
  const Column& column(std::string_view name) const;
  /// Any cell, including key and index cells.
  Cell cell(std::string_view column, std::size_t row) const;

  /// Numeric view of the index or a numeric measurement column.
  /// Throws UnknownColumn or TypeMismatch.
  std::vector<std::optional<double>> numeric(std::string_view name) const;
  /// Non-missing numeric values of one key in index order.
  std::vector<double> values(std::string_view name, const KeyGroup& group) const;

  /// Throws ColumnCollision, or InvalidArgument on a length mismatch.
  PanelTable with_column(Column column) const;
  PanelTable with_columns_first(std::vector<Column> columns) const;
  /// Throws UnknownColumn.
  PanelTable without_column(std::string_view name) const;
  /// Rows of the keys accepted by `keep`, in storage order.
  PanelTable select_keys(const std::function<bool(std::string_view)>& keep) const;

 private:
  friend PanelTable build_panel(std::vector<Column> columns, const PanelSchema& schema);
  void rebuild_groups();

  PanelSchema schema_;
  ColumnType index_type_ = ColumnType::Integer;
  std::vector<std::string> keys_;
  std::vector<double> index_;
  std::vector<Column> columns_;
  std::vector<KeyGroup> groups_;
};

/// Record-oriented input: ordered (column, cell) pairs.
using Record = std::vector<std::pair<std::string, Cell>>;

/// Validates and sorts columnar input into a PanelTable.
///
/// Errors: MissingColumn when a designated column is absent; InvalidArgument
/// when key and index coincide or columns differ in length; EmptyTable for
/// zero rows; MissingKeyOrIndex for a missing key/index cell; TypeMismatch
/// for a non-numeric index; DuplicateKeyIndex when a (key, index) pair
/// repeats. Record-level errors carry the offending input record.
PanelTable build_panel(std::vector<Column> columns, const PanelSchema& schema);
PanelTable build_panel(std::span<const Record> records, const PanelSchema& schema);

struct IndexSummary {
  double min = 0;
  double q25 = 0;
  double median = 0;
  double mean = 0;
  double q75 = 0;
  double max = 0;
};

/// Sorted distinct index values over the whole table.
std::vector<double> distinct_index(const PanelTable& table);

/// True iff consecutive distinct index values are equally spaced.
/// Throws TooFewIndexValues.
bool index_regular(const PanelTable& table);

/// Six-number summary of the distinct index values. Throws EmptyTable.
IndexSummary index_summary(const PanelTable& table);

/// Rows per key, as integer column `n_obs`. Throws EmptyTable.
FeatureTable n_obs(const PanelTable& table);

/// Adds `n_obs`, constant within key. Throws EmptyTable or ColumnCollision.
PanelTable add_n_obs(const PanelTable& table);

/// Keeps every row of the keys whose feature row satisfies `predicate`.
/// Keys without a feature row are dropped.
PanelTable filter_keys(const PanelTable& table, const FeatureTable& features,
                       const std::function<bool(const FeatureRow&)>& predicate);

/// Left join of per-key features onto the panel, restricted to the feature
/// keys. Feature columns come before the panel's measurement columns.
/// Throws KeyMismatch or ColumnCollision.
PanelTable join_features(const FeatureTable& features, const PanelTable& table);

}  // namespace panelscope
