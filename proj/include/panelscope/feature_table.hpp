#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "panelscope/value.hpp"

namespace panelscope {

class FeatureTable;

/// Read-only view of one row of a FeatureTable.
class FeatureRow {
 public:
  FeatureRow(const FeatureTable& table, std::size_t row) noexcept
      : table_(&table), row_(row) {}

  const std::string& key() const;
  /// Cell of the named column; throws UnknownColumn.
  const Cell& operator[](std::string_view column) const;
  std::size_t index() const noexcept { return row_; }

 private:
  const FeatureTable* table_;
  std::size_t row_;
};

/// One row per key, with named feature columns.
class FeatureTable {
 public:
  FeatureTable() = default;
  /// Throws DuplicateName if a key repeats.
  FeatureTable(std::string key_column, std::vector<std::string> keys);

  const std::string& key_column() const noexcept { return key_column_; }
  const std::vector<std::string>& keys() const noexcept { return keys_; }
  std::size_t size() const noexcept { return keys_.size(); }
  bool empty() const noexcept { return keys_.empty(); }

  const std::vector<Column>& columns() const noexcept { return columns_; }
  std::vector<std::string> column_names() const;
  bool has_column(std::string_view name) const noexcept;
  /// Throws UnknownColumn.
  const Column& column(std::string_view name) const;
  /// Numeric view of a column; throws UnknownColumn or TypeMismatch.
  std::vector<std::optional<double>> numeric(std::string_view name) const;

  /// Appends a column; throws ColumnCollision or InvalidArgument on a length
  /// mismatch.
  void add_column(Column column);

  std::optional<std::size_t> find(std::string_view key) const noexcept;
  FeatureRow row(std::size_t i) const noexcept { return FeatureRow(*this, i); }

  /// Subset of rows, in the order given.
  FeatureTable select_rows(std::span<const std::size_t> rows) const;

 private:
  std::string key_column_ = "key";
  std::vector<std::string> keys_;
  std::vector<Column> columns_;
};

}  // namespace panelscope
