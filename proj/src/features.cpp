#include "panelscope/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "panelscope/error.hpp"
#include "panelscope/quantile.hpp"

namespace panelscope {

namespace {

std::vector<double> sorted_copy(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "feature of an empty sequence");
  if (std::any_of(values.begin(), values.end(), [](double v) { return !std::isfinite(v); })) {
    throw Error(ErrorCode::NonFiniteInput, "feature input contains a non-finite value");
  }
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  return s;
}

void require_at_least(std::span<const double> values, std::size_t n, const char* what) {
  if (values.size() < n) {
    throw Error(ErrorCode::TooFewValues, std::string(what) + " needs at least " +
                                             std::to_string(n) + " values, got " +
                                             std::to_string(values.size()));
  }
}

std::vector<double> differences(std::span<const double> values) {
  std::vector<double> d;
  d.reserve(values.size() > 0 ? values.size() - 1 : 0);
  for (std::size_t i = 1; i < values.size(); ++i) d.push_back(values[i] - values[i - 1]);
  return d;
}

Cell real_cell(double v) {
  if (std::isnan(v)) return Cell{};
  return v;
}

template <typename Pred>
bool all_steps(std::span<const double> values, Pred pred) {
  require_at_least(values, 2, "a monotonicity check");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!pred(values[i] - values[i - 1])) return false;
  }
  return true;
}

}  // namespace

double mean(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "mean of an empty sequence");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  require_at_least(values, 2, "sample variance");
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return ss / static_cast<double>(values.size() - 1);
}

FiveNum feat_five_num(std::span<const double> values) {
  const auto s = sorted_copy(values);
  return FiveNum{s.front(), quantile_type8_sorted(s, 0.25), quantile_type8_sorted(s, 0.5),
                 quantile_type8_sorted(s, 0.75), s.back()};
}

Ranges feat_ranges(std::span<const double> values) {
  const auto f = feat_five_num(values);
  return Ranges{f.min, f.max, f.max - f.min, f.q75 - f.q25};
}

Spread feat_spread(std::span<const double> values) {
  require_at_least(values, 2, "spread");
  const auto s = sorted_copy(values);
  const double var = sample_variance(s);
  const double med = quantile_type8_sorted(s, 0.5);
  std::vector<double> dev;
  dev.reserve(s.size());
  for (double v : s) dev.push_back(std::abs(v - med));
  std::sort(dev.begin(), dev.end());
  const double mad = kMadScale * quantile_type8_sorted(dev, 0.5);
  const double iqr = quantile_type8_sorted(s, 0.75) - quantile_type8_sorted(s, 0.25);
  return Spread{var, std::sqrt(var), mad, iqr};
}

bool increasing(std::span<const double> values) {
  return all_steps(values, [](double d) { return d > 0; });
}
bool decreasing(std::span<const double> values) {
  return all_steps(values, [](double d) { return d < 0; });
}
bool unvarying(std::span<const double> values) {
  return all_steps(values, [](double d) { return d == 0; });
}
bool monotonic(std::span<const double> values) {
  return increasing(values) || decreasing(values);
}

MonotonicFlags feat_monotonic(std::span<const double> values) {
  const bool inc = increasing(values);
  const bool dec = decreasing(values);
  return MonotonicFlags{inc, dec, unvarying(values), inc || dec};
}

DiffSummary feat_diff_summary(std::span<const double> values) {
  require_at_least(values, 2, "a difference summary");
  const auto d = differences(values);
  const auto f = feat_five_num(d);
  const double var =
      d.size() >= 2 ? sample_variance(d) : std::numeric_limits<double>::quiet_NaN();
  return DiffSummary{f.min, f.q25, f.med, mean(d), f.q75, f.max, var, std::sqrt(var),
                     f.q75 - f.q25};
}

// ---------------------------------------------------------------------------

FeatureEntry scalar_entry(std::string name, ScalarFn fn) {
  return FeatureEntry{std::move(name), {},
                      [fn = std::move(fn)](std::span<const double> x) -> std::vector<Cell> {
                        return {fn(x)};
                      }};
}

FeatureSet::FeatureSet(std::vector<FeatureEntry> entries) : entries_(std::move(entries)) {
  std::unordered_set<std::string_view> seen;
  for (const auto& e : entries_) {
    if (!seen.insert(e.name).second) {
      throw Error(ErrorCode::DuplicateName, "feature '" + e.name + "' is defined twice");
    }
  }
}

bool FeatureSet::contains(std::string_view name) const noexcept {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const FeatureEntry& e) { return e.name == name; });
}

std::vector<std::string> FeatureSet::column_names() const {
  std::vector<std::string> names;
  for (const auto& e : entries_) {
    if (e.fields.empty()) {
      names.push_back(e.name);
    } else {
      names.insert(names.end(), e.fields.begin(), e.fields.end());
    }
  }
  std::unordered_map<std::string, int> count;
  for (const auto& n : names) ++count[n];
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (count[names[i]] > 1) names[i] += "..." + std::to_string(i + 1);
  }
  return names;
}

FeatureSet register_feature(const FeatureSet& set, std::string name, ScalarFn fn) {
  if (set.contains(name)) {
    throw Error(ErrorCode::DuplicateName, "feature '" + name + "' already registered");
  }
  auto entries = set.entries();
  entries.push_back(scalar_entry(std::move(name), std::move(fn)));
  return FeatureSet(std::move(entries));
}

FeatureEntry three_num_entry() {
  return {"three_num", {"min", "med", "max"}, [](std::span<const double> x) {
            const auto f = feat_five_num(x);
            return std::vector<Cell>{f.min, f.med, f.max};
          }};
}

FeatureEntry five_num_entry() {
  return {"five_num", {"min", "q25", "med", "q75", "max"}, [](std::span<const double> x) {
            const auto f = feat_five_num(x);
            return std::vector<Cell>{f.min, f.q25, f.med, f.q75, f.max};
          }};
}

FeatureEntry ranges_entry() {
  return {"ranges", {"min", "max", "range_diff", "iqr"}, [](std::span<const double> x) {
            const auto r = feat_ranges(x);
            return std::vector<Cell>{r.min, r.max, r.range_diff, r.iqr};
          }};
}

FeatureEntry spread_entry() {
  return {"spread", {"var", "sd", "mad", "iqr"}, [](std::span<const double> x) {
            const auto s = feat_spread(x);
            return std::vector<Cell>{s.var, s.sd, s.mad, s.iqr};
          }};
}

FeatureEntry monotonic_entry() {
  return {"monotonic",
          {"increase", "decrease", "unvary", "monotonic"},
          [](std::span<const double> x) {
            const auto m = feat_monotonic(x);
            return std::vector<Cell>{m.increase, m.decrease, m.unvary, m.monotonic};
          }};
}

namespace {

const std::vector<std::string>& diff_fields() {
  static const std::vector<std::string> fields{"diff_min", "diff_q25", "diff_median",
                                               "diff_mean", "diff_q75", "diff_max",
                                               "diff_var", "diff_sd", "diff_iqr"};
  return fields;
}

void append_diff_cells(std::vector<Cell>& out, const DiffSummary& d) {
  for (double v : {d.diff_min, d.diff_q25, d.diff_median, d.diff_mean, d.diff_q75, d.diff_max,
                   d.diff_var, d.diff_sd, d.diff_iqr}) {
    out.push_back(real_cell(v));
  }
}

}  // namespace

FeatureEntry diff_summary_entry() {
  return {"diff_summary", diff_fields(), [](std::span<const double> x) {
            std::vector<Cell> out;
            append_diff_cells(out, feat_diff_summary(x));
            return out;
          }};
}

FeatureEntry brolgar_entry() {
  std::vector<std::string> fields{"min",   "max",        "median", "mean", "q25",
                                  "q75",   "range1",     "range2", "range_diff", "sd",
                                  "var",   "mad",        "iqr",    "increase",   "decrease",
                                  "unvary"};
  fields.insert(fields.end(), diff_fields().begin(), diff_fields().end());
  return {"brolgar", std::move(fields), [](std::span<const double> x) {
            const auto f = feat_five_num(x);
            const auto s = feat_spread(x);
            const auto m = feat_monotonic(x);
            auto flag = [](bool b) { return b ? 1.0 : 0.0; };
            std::vector<Cell> out{f.min, f.max, f.med, mean(x), f.q25, f.q75,
                                  f.min, f.max, f.max - f.min, s.sd, s.var, s.mad, s.iqr,
                                  flag(m.increase), flag(m.decrease), flag(m.unvary)};
            append_diff_cells(out, feat_diff_summary(x));
            return out;
          }};
}

FeatureSet feature_set_five_num() { return FeatureSet({five_num_entry()}); }
FeatureSet feature_set_three_num() { return FeatureSet({three_num_entry()}); }
FeatureSet feature_set_ranges() { return FeatureSet({ranges_entry()}); }
FeatureSet feature_set_spread() { return FeatureSet({spread_entry()}); }
FeatureSet feature_set_monotonic() { return FeatureSet({monotonic_entry()}); }
FeatureSet feature_set_diff_summary() { return FeatureSet({diff_summary_entry()}); }
FeatureSet feature_set_brolgar() { return FeatureSet({brolgar_entry()}); }

FeatureSet feature_set_all() {
  return FeatureSet({three_num_entry(), five_num_entry(), ranges_entry(), spread_entry(),
                     brolgar_entry(), monotonic_entry()});
}

FeatureSet feature_set_by_name(std::string_view name) {
  if (name == "three_num") return feature_set_three_num();
  if (name == "five_num") return feature_set_five_num();
  if (name == "ranges") return feature_set_ranges();
  if (name == "spread") return feature_set_spread();
  if (name == "monotonic") return feature_set_monotonic();
  if (name == "diff_summary") return feature_set_diff_summary();
  if (name == "brolgar") return feature_set_brolgar();
  if (name == "all") return feature_set_all();
  throw Error(ErrorCode::InvalidArgument, "unknown feature set '" + std::string(name) + "'");
}

FeatureEntry scalar_feature_by_name(std::string_view name) {
  using V = std::span<const double>;
  const std::string n(name);
  if (n == "min") return scalar_entry(n, [](V x) { return Cell{feat_five_num(x).min}; });
  if (n == "max") return scalar_entry(n, [](V x) { return Cell{feat_five_num(x).max}; });
  if (n == "median") return scalar_entry(n, [](V x) { return Cell{feat_five_num(x).med}; });
  if (n == "mean") return scalar_entry(n, [](V x) { return Cell{mean(x)}; });
  if (n == "var") return scalar_entry(n, [](V x) { return Cell{sample_variance(x)}; });
  if (n == "sd") return scalar_entry(n, [](V x) { return Cell{std::sqrt(sample_variance(x))}; });
  if (n == "first") return scalar_entry(n, [](V x) { return Cell{x.front()}; });
  if (n == "last") return scalar_entry(n, [](V x) { return Cell{x.back()}; });
  if (n == "increasing") return scalar_entry(n, [](V x) { return Cell{increasing(x)}; });
  if (n == "decreasing") return scalar_entry(n, [](V x) { return Cell{decreasing(x)}; });
  if (n == "unvarying") return scalar_entry(n, [](V x) { return Cell{unvarying(x)}; });
  if (n == "monotonic") return scalar_entry(n, [](V x) { return Cell{monotonic(x)}; });
  if (n == "n_obs") {
    return scalar_entry(n, [](V x) { return Cell{static_cast<std::int64_t>(x.size())}; });
  }
  throw Error(ErrorCode::InvalidArgument, "unknown feature '" + n + "'");
}

std::vector<std::pair<std::string, Cell>> apply_features(std::span<const double> values,
                                                         const FeatureSet& set) {
  const auto names = set.column_names();
  std::vector<std::pair<std::string, Cell>> out;
  out.reserve(names.size());
  std::size_t col = 0;
  for (const auto& entry : set.entries()) {
    std::vector<Cell> cells;
    try {
      cells = entry.fn(values);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TooFewValues) throw;
      cells.assign(entry.width(), Cell{});
    }
    if (cells.size() != entry.width()) {
      throw Error(ErrorCode::InvalidArgument,
                  "feature '" + entry.name + "' returned " + std::to_string(cells.size()) +
                      " values for " + std::to_string(entry.width()) + " fields");
    }
    for (auto& c : cells) out.emplace_back(names[col++], std::move(c));
  }
  return out;
}

FeatureTable compute_features(const PanelTable& table, std::string_view var,
                              const FeatureSet& set) {
  (void)table.numeric(var);  // UnknownColumn / TypeMismatch up front
  const auto names = set.column_names();
  std::vector<std::string> keys;
  std::vector<Column> columns(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) columns[i].name = names[i];

  for (const auto& g : table.groups()) {
    const auto values = table.values(var, g);
    if (values.empty()) {
      throw Error(ErrorCode::AllMissingForKey,
                  "key '" + g.key + "' has no non-missing '" + std::string(var) + "' values");
    }
    auto row = apply_features(values, set);
    for (std::size_t i = 0; i < row.size(); ++i) columns[i].cells.push_back(std::move(row[i].second));
    keys.push_back(g.key);
  }

  FeatureTable out(table.key_column(), std::move(keys));
  for (auto& col : columns) {
    const auto it = std::find_if(col.cells.begin(), col.cells.end(),
                                 [](const Cell& c) { return !is_missing(c); });
    col.type = it == col.cells.end() ? ColumnType::Real : cell_type(*it);
    out.add_column(std::move(col));
  }
  return out;
}

}  // namespace panelscope
