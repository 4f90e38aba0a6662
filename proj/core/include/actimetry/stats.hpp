#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace actimetry {

inline constexpr std::size_t kStatFeatureCount = 14;

/// Order of the values returned by stat_features().
inline constexpr std::array<std::string_view, kStatFeatureCount> kStatFeatureNames = {
    "mean", "max", "min", "range", "std", "variance", "cv",
    "p1",   "p5",  "p25", "p50",   "p75", "p95",      "p99"};

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_std(std::span<const double> x);

/// Linearly interpolated quantile of an ascending-sorted, non-empty range,
/// q in [0, 1]: position (n - 1) * q between closest ranks.
double quantile_sorted(std::span<const double> sorted, double q);

/// mean, max, min, range, std, variance, cv, and the 1/5/25/50/75/95/99th
/// percentiles. Fewer than two values yields all-missing; cv is missing
/// when the mean is zero.
std::array<double, kStatFeatureCount> stat_features(std::span<const double> x);

}  // namespace actimetry
