#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "panelscope/feature_table.hpp"
#include "panelscope/panel.hpp"
#include "panelscope/value.hpp"

namespace panelscope {

// ---------------------------------------------------------------------------
// Summaries of one value sequence. Callers drop missing values beforehand;
// quantiles are type-8 throughout.

struct FiveNum {
  double min, q25, med, q75, max;
};

struct Ranges {
  double min, max, range_diff, iqr;
};

/// var is the sample variance (divisor n - 1); mad is scaled by 1.4826.
struct Spread {
  double var, sd, mad, iqr;
};

/// Strict: increase means every consecutive difference is > 0.
struct MonotonicFlags {
  bool increase, decrease, unvary, monotonic;
};

/// Summary of consecutive differences x[i+1] - x[i]. With a single
/// difference the variance, sd are NaN.
struct DiffSummary {
  double diff_min, diff_q25, diff_median, diff_mean, diff_q75, diff_max;
  double diff_var, diff_sd, diff_iqr;
};

inline constexpr double kMadScale = 1.4826;

FiveNum feat_five_num(std::span<const double> values);        // EmptyInput
Ranges feat_ranges(std::span<const double> values);           // EmptyInput
Spread feat_spread(std::span<const double> values);           // TooFewValues
MonotonicFlags feat_monotonic(std::span<const double> values);  // TooFewValues
DiffSummary feat_diff_summary(std::span<const double> values);  // TooFewValues

bool increasing(std::span<const double> values);
bool decreasing(std::span<const double> values);
bool unvarying(std::span<const double> values);
bool monotonic(std::span<const double> values);

double sample_variance(std::span<const double> values);  // TooFewValues
double mean(std::span<const double> values);             // EmptyInput

// ---------------------------------------------------------------------------
// Feature sets

/// A feature computes one or more cells from a key's values. Scalar features
/// have no `fields` and produce one column named after the entry; record
/// features produce one column per field, named by the field.
using FeatureFn = std::function<std::vector<Cell>(std::span<const double>)>;
using ScalarFn = std::function<Cell(std::span<const double>)>;

struct FeatureEntry {
  std::string name;
  std::vector<std::string> fields;
  FeatureFn fn;

  std::size_t width() const noexcept { return fields.empty() ? 1 : fields.size(); }
};

FeatureEntry scalar_entry(std::string name, ScalarFn fn);

class FeatureSet {
 public:
  FeatureSet() = default;
  /// Throws DuplicateName when two entries share a name.
  explicit FeatureSet(std::vector<FeatureEntry> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<FeatureEntry>& entries() const noexcept { return entries_; }
  bool contains(std::string_view name) const noexcept;

  /// Output column names. A name produced more than once is rewritten as
  /// "<name>...<k>" at every occurrence, k being its 1-based column position.
  std::vector<std::string> column_names() const;

 private:
  std::vector<FeatureEntry> entries_;
};

/// Copy of `set` with a scalar feature appended. Throws DuplicateName.
FeatureSet register_feature(const FeatureSet& set, std::string name, ScalarFn fn);

// Built-in record entries.
FeatureEntry three_num_entry();     // min, med, max
FeatureEntry five_num_entry();      // min, q25, med, q75, max
FeatureEntry ranges_entry();        // min, max, range_diff, iqr
FeatureEntry spread_entry();        // var, sd, mad, iqr
FeatureEntry monotonic_entry();     // increase, decrease, unvary, monotonic
FeatureEntry diff_summary_entry();  // diff_min ... diff_iqr
FeatureEntry brolgar_entry();       // every built-in summary in one record

FeatureSet feature_set_five_num();
FeatureSet feature_set_three_num();
FeatureSet feature_set_ranges();
FeatureSet feature_set_spread();
FeatureSet feature_set_monotonic();
FeatureSet feature_set_diff_summary();
FeatureSet feature_set_brolgar();
/// three_num, five_num, ranges, spread, brolgar, monotonic.
FeatureSet feature_set_all();

/// Named set lookup: three_num, five_num, ranges, spread, monotonic,
/// diff_summary, brolgar, all. Throws InvalidArgument.
FeatureSet feature_set_by_name(std::string_view name);

/// Named scalar lookup: min, max, median, mean, var, sd, first, last,
/// increasing, decreasing, unvarying, monotonic, n_obs. Throws InvalidArgument.
FeatureEntry scalar_feature_by_name(std::string_view name);

/// Applies every entry of `set` to each key's non-missing `var` values in
/// index order, one output row per key.
///
/// Throws UnknownColumn, TypeMismatch, AllMissingForKey. An entry that needs
/// more values than a key has (TooFewValues) leaves that key's cells missing.
FeatureTable compute_features(const PanelTable& table, std::string_view var,
                              const FeatureSet& set);

/// Applies `set` to one sequence and returns (column name, cell) pairs.
std::vector<std::pair<std::string, Cell>> apply_features(std::span<const double> values,
                                                         const FeatureSet& set);

}  // namespace panelscope
