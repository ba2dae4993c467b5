#include "panelscope/feature_table.hpp"

#include <algorithm>
#include <unordered_set>

#include "panelscope/error.hpp"

namespace panelscope {

const std::string& FeatureRow::key() const { return table_->keys()[row_]; }

const Cell& FeatureRow::operator[](std::string_view column) const {
  return table_->column(column).cells[row_];
}

FeatureTable::FeatureTable(std::string key_column, std::vector<std::string> keys)
    : key_column_(std::move(key_column)), keys_(std::move(keys)) {
  std::unordered_set<std::string_view> seen;
  for (const auto& k : keys_) {
    if (!seen.insert(k).second) {
      throw Error(ErrorCode::DuplicateName, "key '" + k + "' appears twice in a feature table");
    }
  }
}

std::vector<std::string> FeatureTable::column_names() const {
  std::vector<std::string> names{key_column_};
  for (const auto& c : columns_) names.push_back(c.name);
  return names;
}

bool FeatureTable::has_column(std::string_view name) const noexcept {
  return std::any_of(columns_.begin(), columns_.end(),
                     [&](const Column& c) { return c.name == name; });
}

const Column& FeatureTable::column(std::string_view name) const {
  for (const auto& c : columns_) {
    if (c.name == name) return c;
  }
  throw Error(ErrorCode::UnknownColumn, "no feature column '" + std::string(name) + "'");
}

std::vector<std::optional<double>> FeatureTable::numeric(std::string_view name) const {
  const auto& col = column(name);
  if (col.type == ColumnType::Text) {
    throw Error(ErrorCode::TypeMismatch, "column '" + col.name + "' is not numeric");
  }
  std::vector<std::optional<double>> out;
  out.reserve(col.cells.size());
  for (const auto& c : col.cells) out.push_back(as_real(c));
  return out;
}

void FeatureTable::add_column(Column column) {
  if (column.name == key_column_ || has_column(column.name)) {
    throw Error(ErrorCode::ColumnCollision, "column '" + column.name + "' already exists");
  }
  if (column.cells.size() != keys_.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "column '" + column.name + "' has " + std::to_string(column.cells.size()) +
                    " cells for " + std::to_string(keys_.size()) + " keys");
  }
  columns_.push_back(std::move(column));
}

std::optional<std::size_t> FeatureTable::find(std::string_view key) const noexcept {
  const auto it = std::find(keys_.begin(), keys_.end(), key);
  if (it == keys_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - keys_.begin());
}

FeatureTable FeatureTable::select_rows(std::span<const std::size_t> rows) const {
  std::vector<std::string> keys;
  keys.reserve(rows.size());
  for (auto r : rows) keys.push_back(keys_.at(r));
  FeatureTable out(key_column_, std::move(keys));
  for (const auto& c : columns_) {
    Column sub{c.name, c.type, {}};
    sub.cells.reserve(rows.size());
    for (auto r : rows) sub.cells.push_back(c.cells[r]);
    out.columns_.push_back(std::move(sub));
  }
  return out;
}

}  // namespace panelscope
