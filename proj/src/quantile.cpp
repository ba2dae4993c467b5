#include "panelscope/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "panelscope/error.hpp"

namespace panelscope {

namespace {

std::vector<double> checked_sorted(std::span<const double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "quantile of an empty sequence");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "probability must lie in [0, 1]");
  }
  if (std::any_of(values.begin(), values.end(), [](double v) { return !std::isfinite(v); })) {
    throw Error(ErrorCode::NonFiniteInput, "quantile input contains a non-finite value");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

// h is the 1-based fractional order statistic.
double interpolate(std::span<const double> sorted, double h) noexcept {
  const auto n = static_cast<double>(sorted.size());
  h = std::clamp(h, 1.0, n);
  const double lo = std::floor(h);
  const auto i = static_cast<std::size_t>(lo);
  if (i >= sorted.size()) return sorted.back();
  const double a = sorted[i - 1];
  const double b = sorted[i];
  return std::clamp(a + (h - lo) * (b - a), a, b);
}

}  // namespace

double quantile_type8_sorted(std::span<const double> sorted, double p) noexcept {
  const auto n = static_cast<double>(sorted.size());
  return interpolate(sorted, ((3.0 * n + 1.0) * p + 1.0) / 3.0);
}

double quantile_type8(std::span<const double> values, double p) {
  const auto sorted = checked_sorted(values, p);
  return quantile_type8_sorted(sorted, p);
}

double quantile_type7_sorted(std::span<const double> sorted, double p) noexcept {
  const auto n = static_cast<double>(sorted.size());
  return interpolate(sorted, (n - 1.0) * p + 1.0);
}

double quantile_type7(std::span<const double> values, double p) {
  const auto sorted = checked_sorted(values, p);
  return quantile_type7_sorted(sorted, p);
}

double median(std::span<const double> values) { return quantile_type8(values, 0.5); }

}  // namespace panelscope
