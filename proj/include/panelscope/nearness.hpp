#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "panelscope/feature_table.hpp"
#include "panelscope/features.hpp"
#include "panelscope/panel.hpp"

namespace panelscope {

/// Ordinary least squares line for one key.
///
/// predictions/residuals are aligned with the key's rows; rows where either
/// variable is missing have no prediction and no residual.
struct KeyFit {
  std::string key;
  double intercept = 0;
  double slope = 0;
  std::vector<std::optional<double>> predictions;
  std::vector<std::optional<double>> residuals;
  double rss = 0;
};

struct FitOptions {
  /// Fit against predictor - min(predictor over the whole table), so that
  /// the intercept sits at the first index value.
  bool center_predictor = false;
};

struct FitResult {
  std::vector<KeyFit> fits;
  /// Keys with fewer than two distinct predictor values; not fitted.
  std::vector<std::string> degenerate;
};

/// Fits response ~ predictor separately for every key.
/// Throws UnknownColumn or TypeMismatch.
FitResult fit_keys(const PanelTable& table, std::string_view response,
                   std::string_view predictor, FitOptions options = {});

/// One row per fitted key with `intercept` and `slope` columns. Degenerate
/// keys are omitted and reported through `degenerate` when given.
FeatureTable key_slope(const PanelTable& table, std::string_view response,
                       std::string_view predictor, std::vector<std::string>* degenerate = nullptr,
                       FitOptions options = {});

/// Adds `pred`, `res` and `rss` (constant within key). Throws MissingFit.
PanelTable augment_fit(const PanelTable& table, const std::vector<KeyFit>& fits);

struct NearestKey {
  std::string key;
  double value = 0;
  std::string stat;
  double stat_value = 0;
  double stat_diff = 0;
};

using NearestKeys = std::vector<NearestKey>;

/// For every statistic produced by `stats` over the `var` column, the keys
/// whose value is closest to it, ties included. Keys with a missing value are
/// ignored. Throws EmptyFeatures, UnknownColumn or TypeMismatch.
NearestKeys keys_near(const FeatureTable& features, std::string_view var,
                      const FeatureSet& stats = feature_set_five_num());

/// n > 0: the n keys with the largest `var`; n < 0: the |n| smallest. Every
/// key tied with the boundary value is kept. Rows keep their original order.
/// Throws NOutOfRange.
FeatureTable top_n_keys(const FeatureTable& features, std::string_view var, int n);

/// Reduces a column that is constant within each key (such as `rss`) to a
/// one-row-per-key table. Throws InvalidArgument when a key has two values.
FeatureTable per_key_constant(const PanelTable& table, std::string_view column);

}  // namespace panelscope
