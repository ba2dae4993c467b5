#include "panelscope/panel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "panelscope/error.hpp"
#include "panelscope/quantile.hpp"

namespace panelscope {

namespace {

std::string key_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  return format_cell(c);
}

std::size_t find_column(const std::vector<Column>& columns, std::string_view name) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  return columns.size();
}

ColumnType infer_type(const std::vector<Cell>& cells, const std::string& name) {
  bool any_int = false, any_real = false, any_text = false, any_bool = false;
  for (const auto& c : cells) {
    switch (c.index()) {
      case 1: any_int = true; break;
      case 2: any_real = true; break;
      case 3: any_text = true; break;
      case 4: any_bool = true; break;
      default: break;
    }
  }
  const int kinds = int(any_int || any_real) + int(any_text) + int(any_bool);
  if (kinds > 1) {
    throw Error(ErrorCode::TypeMismatch, "column '" + name + "' mixes incompatible cell types");
  }
  if (any_text) return ColumnType::Text;
  if (any_bool) return ColumnType::Boolean;
  if (any_real) return ColumnType::Real;
  return any_int ? ColumnType::Integer : ColumnType::Real;
}

}  // namespace

const KeyGroup* PanelTable::find_key(std::string_view key) const noexcept {
  const auto it = std::lower_bound(groups_.begin(), groups_.end(), key,
                                   [](const KeyGroup& g, std::string_view k) { return g.key < k; });
  if (it == groups_.end() || it->key != key) return nullptr;
  return &*it;
}

std::vector<std::string> PanelTable::column_names() const {
  std::vector<std::string> names{schema_.key_col, schema_.index_col};
  for (const auto& c : columns_) names.push_back(c.name);
  return names;
}

bool PanelTable::has_column(std::string_view name) const noexcept {
  return name == schema_.key_col || name == schema_.index_col ||
         find_column(columns_, name) < columns_.size();
}

const Column& PanelTable::column(std::string_view name) const {
  const auto i = find_column(columns_, name);
  if (i == columns_.size()) {
    throw Error(ErrorCode::UnknownColumn, "no measurement column '" + std::string(name) + "'");
  }
  return columns_[i];
}

Cell PanelTable::cell(std::string_view name, std::size_t row) const {
  if (name == schema_.key_col) return keys_.at(row);
  if (name == schema_.index_col) {
    if (index_type_ == ColumnType::Integer) return static_cast<std::int64_t>(index_.at(row));
    return index_.at(row);
  }
  return column(name).cells.at(row);
}

std::vector<std::optional<double>> PanelTable::numeric(std::string_view name) const {
  if (name == schema_.index_col) return {index_.begin(), index_.end()};
  if (name == schema_.key_col) {
    throw Error(ErrorCode::TypeMismatch, "key column '" + schema_.key_col + "' is not numeric");
  }
  const auto& col = column(name);
  if (!col.is_numeric()) {
    throw Error(ErrorCode::TypeMismatch, "column '" + col.name + "' is " +
                                             std::string(to_string(col.type)) + ", not numeric");
  }
  std::vector<std::optional<double>> out;
  out.reserve(col.cells.size());
  for (const auto& c : col.cells) out.push_back(as_real(c));
  return out;
}

std::vector<double> PanelTable::values(std::string_view name, const KeyGroup& group) const {
  std::vector<double> out;
  out.reserve(group.size());
  if (name == schema_.index_col) {
    out.assign(index_.begin() + static_cast<std::ptrdiff_t>(group.begin),
               index_.begin() + static_cast<std::ptrdiff_t>(group.end));
    return out;
  }
  const auto& col = column(name);
  if (!col.is_numeric()) {
    throw Error(ErrorCode::TypeMismatch, "column '" + col.name + "' is not numeric");
  }
  for (std::size_t r = group.begin; r < group.end; ++r) {
    if (auto v = as_real(col.cells[r])) out.push_back(*v);
  }
  return out;
}

PanelTable PanelTable::with_column(Column column) const {
  if (has_column(column.name)) {
    throw Error(ErrorCode::ColumnCollision, "column '" + column.name + "' already exists");
  }
  if (column.cells.size() != rows()) {
    throw Error(ErrorCode::InvalidArgument, "column '" + column.name + "' has the wrong length");
  }
  PanelTable out = *this;
  out.columns_.push_back(std::move(column));
  return out;
}

PanelTable PanelTable::with_columns_first(std::vector<Column> columns) const {
  std::unordered_set<std::string> seen;
  for (const auto& c : columns) {
    if (has_column(c.name) || !seen.insert(c.name).second) {
      throw Error(ErrorCode::ColumnCollision, "column '" + c.name + "' already exists");
    }
    if (c.cells.size() != rows()) {
      throw Error(ErrorCode::InvalidArgument, "column '" + c.name + "' has the wrong length");
    }
  }
  PanelTable out = *this;
  for (auto& c : out.columns_) columns.push_back(std::move(c));
  out.columns_ = std::move(columns);
  return out;
}

PanelTable PanelTable::without_column(std::string_view name) const {
  const auto i = find_column(columns_, name);
  if (i == columns_.size()) {
    throw Error(ErrorCode::UnknownColumn, "no measurement column '" + std::string(name) + "'");
  }
  PanelTable out = *this;
  out.columns_.erase(out.columns_.begin() + static_cast<std::ptrdiff_t>(i));
  return out;
}

PanelTable PanelTable::select_keys(const std::function<bool(std::string_view)>& keep) const {
  std::vector<std::size_t> rows;
  for (const auto& g : groups_) {
    if (!keep(g.key)) continue;
    for (std::size_t r = g.begin; r < g.end; ++r) rows.push_back(r);
  }
  PanelTable out;
  out.schema_ = schema_;
  out.index_type_ = index_type_;
  out.keys_.reserve(rows.size());
  out.index_.reserve(rows.size());
  for (auto r : rows) {
    out.keys_.push_back(keys_[r]);
    out.index_.push_back(index_[r]);
  }
  for (const auto& c : columns_) {
    Column sub{c.name, c.type, {}};
    sub.cells.reserve(rows.size());
    for (auto r : rows) sub.cells.push_back(c.cells[r]);
    out.columns_.push_back(std::move(sub));
  }
  out.rebuild_groups();
  return out;
}

void PanelTable::rebuild_groups() {
  groups_.clear();
  for (std::size_t r = 0; r < keys_.size(); ++r) {
    if (groups_.empty() || groups_.back().key != keys_[r]) {
      groups_.push_back(KeyGroup{keys_[r], r, r + 1});
    } else {
      groups_.back().end = r + 1;
    }
  }
}

PanelTable build_panel(std::vector<Column> columns, const PanelSchema& schema) {
  if (schema.key_col == schema.index_col) {
    throw Error(ErrorCode::InvalidArgument, "key and index must be distinct columns");
  }
  const auto key_at = find_column(columns, schema.key_col);
  if (key_at == columns.size()) {
    throw Error(ErrorCode::MissingColumn, "key column '" + schema.key_col + "' not found");
  }
  const auto index_at = find_column(columns, schema.index_col);
  if (index_at == columns.size()) {
    throw Error(ErrorCode::MissingColumn, "index column '" + schema.index_col + "' not found");
  }
  std::unordered_set<std::string_view> names;
  for (const auto& c : columns) {
    if (!names.insert(c.name).second) {
      throw Error(ErrorCode::InvalidArgument, "column '" + c.name + "' is declared twice");
    }
  }
  const std::size_t n = columns[key_at].cells.size();
  for (const auto& c : columns) {
    if (c.cells.size() != n) {
      throw Error(ErrorCode::InvalidArgument, "column '" + c.name + "' has a different length");
    }
  }
  if (n == 0) throw Error(ErrorCode::EmptyTable, "no rows");

  const Column& index_col = columns[index_at];
  if (!index_col.is_numeric()) {
    throw Error(ErrorCode::TypeMismatch, "index column '" + index_col.name + "' must be numeric");
  }

  std::vector<std::string> keys(n);
  std::vector<double> index(n);
  for (std::size_t r = 0; r < n; ++r) {
    const Cell& k = columns[key_at].cells[r];
    const Cell& i = index_col.cells[r];
    if (is_missing(k) || is_missing(i)) {
      throw Error::for_record(ErrorCode::MissingKeyOrIndex,
                              "record " + std::to_string(r) + " has a missing key or index", r);
    }
    keys[r] = key_text(k);
    const auto v = as_real(i);
    if (!v || !std::isfinite(*v)) {
      throw Error::for_record(ErrorCode::TypeMismatch,
                              "index of record " + std::to_string(r) + " is not a finite number", r);
    }
    index[r] = *v;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    return index[a] < index[b];
  });

  std::optional<std::size_t> duplicate;
  for (std::size_t j = 1; j < n; ++j) {
    const auto a = order[j - 1], b = order[j];
    if (keys[a] == keys[b] && index[a] == index[b]) {
      if (!duplicate || b < *duplicate) duplicate = b;
    }
  }
  if (duplicate) {
    const auto r = *duplicate;
    throw Error::for_record(ErrorCode::DuplicateKeyIndex,
                            "key '" + keys[r] + "' has more than one row at index " +
                                format_real(index[r]),
                            r);
  }

  PanelTable out;
  out.schema_ = schema;
  out.index_type_ = index_col.type;
  out.keys_.reserve(n);
  out.index_.reserve(n);
  for (auto r : order) {
    out.keys_.push_back(std::move(keys[r]));
    out.index_.push_back(index[r]);
  }
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c == key_at || c == index_at) continue;
    Column sorted{std::move(columns[c].name), columns[c].type, {}};
    sorted.cells.reserve(n);
    for (auto r : order) sorted.cells.push_back(std::move(columns[c].cells[r]));
    out.columns_.push_back(std::move(sorted));
  }
  out.rebuild_groups();
  return out;
}

PanelTable build_panel(std::span<const Record> records, const PanelSchema& schema) {
  std::vector<std::string> names;
  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& rec : records) {
    for (const auto& [name, _] : rec) {
      if (slot.emplace(name, names.size()).second) names.push_back(name);
    }
  }
  std::vector<Column> columns(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    columns[i].name = names[i];
    columns[i].cells.assign(records.size(), Cell{});
  }
  for (std::size_t r = 0; r < records.size(); ++r) {
    bool has_key = false, has_index = false;
    for (const auto& [name, cell] : records[r]) {
      columns[slot.at(name)].cells[r] = cell;
      has_key |= name == schema.key_col;
      has_index |= name == schema.index_col;
    }
    if (!has_key || !has_index) {
      throw Error::for_record(ErrorCode::MissingColumn,
                              "record " + std::to_string(r) + " lacks '" +
                                  (has_key ? schema.index_col : schema.key_col) + "'",
                              r);
    }
  }
  for (auto& col : columns) {
    col.type = infer_type(col.cells, col.name);
    if (col.type == ColumnType::Real) {
      for (auto& c : col.cells) {
        if (const auto* i = std::get_if<std::int64_t>(&c)) c = static_cast<double>(*i);
      }
    }
  }
  if (records.empty()) {
    if (schema.key_col == schema.index_col) {
      throw Error(ErrorCode::InvalidArgument, "key and index must be distinct columns");
    }
    throw Error(ErrorCode::EmptyTable, "no rows");
  }
  return build_panel(std::move(columns), schema);
}

std::vector<double> distinct_index(const PanelTable& table) {
  std::vector<double> v = table.index();
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool index_regular(const PanelTable& table) {
  const auto v = distinct_index(table);
  if (v.size() < 2) {
    throw Error(ErrorCode::TooFewIndexValues, "index regularity needs two distinct index values");
  }
  const double gap = v[1] - v[0];
  for (std::size_t i = 2; i < v.size(); ++i) {
    if (std::abs((v[i] - v[i - 1]) - gap) > 1e-9 * gap) return false;
  }
  return true;
}

IndexSummary index_summary(const PanelTable& table) {
  if (table.empty()) throw Error(ErrorCode::EmptyTable, "index summary of an empty table");
  const auto v = distinct_index(table);
  IndexSummary s;
  s.min = v.front();
  s.q25 = quantile_type7_sorted(v, 0.25);
  s.median = quantile_type7_sorted(v, 0.5);
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  s.q75 = quantile_type7_sorted(v, 0.75);
  s.max = v.back();
  return s;
}

FeatureTable n_obs(const PanelTable& table) {
  if (table.empty()) throw Error(ErrorCode::EmptyTable, "n_obs of an empty table");
  std::vector<std::string> keys;
  Column counts{"n_obs", ColumnType::Integer, {}};
  for (const auto& g : table.groups()) {
    keys.push_back(g.key);
    counts.cells.emplace_back(static_cast<std::int64_t>(g.size()));
  }
  FeatureTable out(table.key_column(), std::move(keys));
  out.add_column(std::move(counts));
  return out;
}

PanelTable add_n_obs(const PanelTable& table) {
  if (table.empty()) throw Error(ErrorCode::EmptyTable, "add_n_obs on an empty table");
  if (table.has_column("n_obs")) {
    throw Error(ErrorCode::ColumnCollision, "column 'n_obs' already exists");
  }
  Column counts{"n_obs", ColumnType::Integer, std::vector<Cell>(table.rows())};
  for (const auto& g : table.groups()) {
    for (std::size_t r = g.begin; r < g.end; ++r) {
      counts.cells[r] = static_cast<std::int64_t>(g.size());
    }
  }
  return table.with_column(std::move(counts));
}

PanelTable filter_keys(const PanelTable& table, const FeatureTable& features,
                       const std::function<bool(const FeatureRow&)>& predicate) {
  std::unordered_set<std::string> keep;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (predicate(features.row(i))) keep.insert(features.keys()[i]);
  }
  return table.select_keys([&](std::string_view k) { return keep.count(std::string(k)) > 0; });
}

PanelTable join_features(const FeatureTable& features, const PanelTable& table) {
  std::unordered_map<std::string_view, std::size_t> feature_row;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& k = features.keys()[i];
    if (table.find_key(k) == nullptr) {
      throw Error(ErrorCode::KeyMismatch, "feature key '" + k + "' is not in the panel");
    }
    feature_row.emplace(k, i);
  }
  const PanelTable subset =
      table.select_keys([&](std::string_view k) { return feature_row.count(k) > 0; });

  std::vector<Column> joined;
  for (const auto& fc : features.columns()) {
    Column col{fc.name, fc.type, std::vector<Cell>(subset.rows())};
    for (const auto& g : subset.groups()) {
      const auto& cell = fc.cells[feature_row.at(g.key)];
      for (std::size_t r = g.begin; r < g.end; ++r) col.cells[r] = cell;
    }
    joined.push_back(std::move(col));
  }
  return subset.with_columns_first(std::move(joined));
}

}  // namespace panelscope
