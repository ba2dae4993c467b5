#pragma once

#include <span>

namespace panelscope {

/// Hyndman-Fan type-8 (median-unbiased) sample quantile.
///
/// With n sorted values x_1..x_n, the fractional order statistic is
/// h = (n + 1/3) p + 1/3, clamped to [1, n]; the result interpolates linearly
/// between x_floor(h) and x_floor(h)+1. p = 0 gives the minimum and p = 1 the
/// maximum.
///
/// Throws EmptyInput, NonFiniteInput, or InvalidArgument for p outside [0, 1].
double quantile_type8(std::span<const double> values, double p);

/// Type-8 quantile of values already sorted ascending. No validation.
double quantile_type8_sorted(std::span<const double> sorted, double p) noexcept;

/// Hyndman-Fan type-7 quantile, h = (n - 1) p + 1 (the R `summary()` rule).
double quantile_type7(std::span<const double> values, double p);
double quantile_type7_sorted(std::span<const double> sorted, double p) noexcept;

double median(std::span<const double> values);

}  // namespace panelscope
