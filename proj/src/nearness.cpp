#include "panelscope/nearness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "panelscope/error.hpp"

namespace panelscope {

FitResult fit_keys(const PanelTable& table, std::string_view response,
                   std::string_view predictor, FitOptions options) {
  const auto y_all = table.numeric(response);
  const auto x_all = table.numeric(predictor);

  double shift = 0.0;
  if (options.center_predictor) {
    shift = std::numeric_limits<double>::infinity();
    for (const auto& x : x_all) {
      if (x) shift = std::min(shift, *x);
    }
    if (!std::isfinite(shift)) shift = 0.0;
  }

  FitResult result;
  for (const auto& g : table.groups()) {
    double sx = 0, sy = 0;
    std::size_t n = 0;
    std::optional<double> first_x;
    bool varied = false;
    for (std::size_t r = g.begin; r < g.end; ++r) {
      if (!x_all[r] || !y_all[r]) continue;
      const double x = *x_all[r] - shift;
      if (first_x && x != *first_x) varied = true;
      if (!first_x) first_x = x;
      sx += x;
      sy += *y_all[r];
      ++n;
    }
    if (!varied) {
      result.degenerate.push_back(g.key);
      continue;
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t r = g.begin; r < g.end; ++r) {
      if (!x_all[r] || !y_all[r]) continue;
      const double dx = *x_all[r] - shift - mx;
      sxx += dx * dx;
      sxy += dx * (*y_all[r] - my);
    }
    KeyFit fit;
    fit.key = g.key;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t r = g.begin; r < g.end; ++r) {
      std::optional<double> pred, res;
      if (x_all[r]) pred = fit.intercept + fit.slope * (*x_all[r] - shift);
      if (pred && y_all[r]) {
        res = *y_all[r] - *pred;
        fit.rss += *res * *res;
      }
      fit.predictions.push_back(pred);
      fit.residuals.push_back(res);
    }
    result.fits.push_back(std::move(fit));
  }
  return result;
}

FeatureTable key_slope(const PanelTable& table, std::string_view response,
                       std::string_view predictor, std::vector<std::string>* degenerate,
                       FitOptions options) {
  auto result = fit_keys(table, response, predictor, options);
  std::vector<std::string> keys;
  Column intercept{"intercept", ColumnType::Real, {}};
  Column slope{"slope", ColumnType::Real, {}};
  for (const auto& f : result.fits) {
    keys.push_back(f.key);
    intercept.cells.emplace_back(f.intercept);
    slope.cells.emplace_back(f.slope);
  }
  FeatureTable out(table.key_column(), std::move(keys));
  out.add_column(std::move(intercept));
  out.add_column(std::move(slope));
  if (degenerate) *degenerate = std::move(result.degenerate);
  return out;
}

PanelTable augment_fit(const PanelTable& table, const std::vector<KeyFit>& fits) {
  std::unordered_map<std::string_view, const KeyFit*> by_key;
  for (const auto& f : fits) by_key.emplace(f.key, &f);

  Column pred{"pred", ColumnType::Real, std::vector<Cell>(table.rows())};
  Column res{"res", ColumnType::Real, std::vector<Cell>(table.rows())};
  Column rss{"rss", ColumnType::Real, std::vector<Cell>(table.rows())};
  for (const auto& g : table.groups()) {
    const auto it = by_key.find(g.key);
    if (it == by_key.end()) throw Error(ErrorCode::MissingFit, "no fit for key '" + g.key + "'");
    const KeyFit& f = *it->second;
    if (f.predictions.size() != g.size() || f.residuals.size() != g.size()) {
      throw Error(ErrorCode::MissingFit, "fit for key '" + g.key + "' has the wrong row count");
    }
    for (std::size_t r = g.begin; r < g.end; ++r) {
      const auto i = r - g.begin;
      if (f.predictions[i]) pred.cells[r] = *f.predictions[i];
      if (f.residuals[i]) res.cells[r] = *f.residuals[i];
      rss.cells[r] = f.rss;
    }
  }
  return table.with_column(std::move(pred)).with_column(std::move(res)).with_column(std::move(rss));
}

NearestKeys keys_near(const FeatureTable& features, std::string_view var,
                      const FeatureSet& stats) {
  if (features.empty()) throw Error(ErrorCode::EmptyFeatures, "keys_near on an empty table");
  const auto column = features.numeric(var);
  std::vector<std::size_t> rows;
  std::vector<double> values;
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (!column[i]) continue;
    rows.push_back(i);
    values.push_back(*column[i]);
  }
  if (values.empty()) {
    throw Error(ErrorCode::EmptyFeatures, "column '" + std::string(var) + "' has no values");
  }

  NearestKeys out;
  for (const auto& [stat, cell] : apply_features(values, stats)) {
    if (is_missing(cell)) continue;
    const auto target = as_real(cell);
    if (!target || std::holds_alternative<bool>(cell)) {
      throw Error(ErrorCode::TypeMismatch, "statistic '" + stat + "' is not numeric");
    }
    double best = std::numeric_limits<double>::infinity();
    for (double v : values) best = std::min(best, std::abs(v - *target));
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double diff = std::abs(values[j] - *target);
      if (diff == best) {
        out.push_back({features.keys()[rows[j]], values[j], stat, *target, diff});
      }
    }
  }
  return out;
}

FeatureTable top_n_keys(const FeatureTable& features, std::string_view var, int n) {
  const auto column = features.numeric(var);
  std::vector<double> present;
  for (const auto& v : column) {
    if (v) present.push_back(*v);
  }
  const auto want = static_cast<std::size_t>(std::abs(n));
  if (n == 0 || want > present.size()) {
    throw Error(ErrorCode::NOutOfRange, "n = " + std::to_string(n) + " for " +
                                            std::to_string(present.size()) + " keys");
  }
  if (n > 0) {
    std::sort(present.begin(), present.end(), std::greater<>());
  } else {
    std::sort(present.begin(), present.end());
  }
  const double boundary = present[want - 1];
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (!column[i]) continue;
    if (n > 0 ? *column[i] >= boundary : *column[i] <= boundary) rows.push_back(i);
  }
  return features.select_rows(rows);
}

FeatureTable per_key_constant(const PanelTable& table, std::string_view column) {
  const auto values = table.numeric(column);
  std::vector<std::string> keys;
  Column out_col{std::string(column), ColumnType::Real, {}};
  if (column != table.index_column()) out_col.type = table.column(column).type;
  for (const auto& g : table.groups()) {
    std::optional<double> value;
    for (std::size_t r = g.begin; r < g.end; ++r) {
      if (!values[r]) continue;
      if (value && *value != *values[r]) {
        throw Error(ErrorCode::InvalidArgument, "column '" + std::string(column) +
                                                    "' varies within key '" + g.key + "'");
      }
      value = values[r];
    }
    keys.push_back(g.key);
    if (!value) {
      out_col.cells.emplace_back();
    } else if (out_col.type == ColumnType::Integer) {
      out_col.cells.emplace_back(static_cast<std::int64_t>(*value));
    } else {
      out_col.cells.emplace_back(*value);
    }
  }
  FeatureTable out(table.key_column(), std::move(keys));
  out.add_column(std::move(out_col));
  return out;
}

}  // namespace panelscope
