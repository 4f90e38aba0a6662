#include "actimetry/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "actimetry/missing.hpp"

namespace actimetry {

double mean(std::span<const double> x) {
  if (x.empty()) return kMissing;
  long double sum = 0.0L;
  for (double v : x) sum += v;
  return static_cast<double>(sum / static_cast<long double>(x.size()));
}

double sample_std(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double mu = mean(x);
  long double ss = 0.0L;
  for (double v : x) ss += (v - mu) * static_cast<long double>(v - mu);
  return static_cast<double>(std::sqrt(ss / static_cast<long double>(x.size() - 1)));
}

double quantile_sorted(std::span<const double> sorted, double q) {
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::array<double, kStatFeatureCount> stat_features(std::span<const double> x) {
  std::array<double, kStatFeatureCount> out;
  out.fill(kMissing);
  if (x.size() < 2) return out;

  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double mu = mean(x);
  long double ss = 0.0L;
  for (double v : x) ss += (v - mu) * static_cast<long double>(v - mu);
  const double var = static_cast<double>(ss / static_cast<long double>(x.size() - 1));
  const double sd = std::sqrt(var);
  out[0] = mu;
  out[1] = sorted.back();
  out[2] = sorted.front();
  out[3] = sorted.back() - sorted.front();
  out[4] = sd;
  out[5] = var;
  out[6] = mu != 0.0 ? sd / mu : kMissing;
  constexpr std::array<double, 7> qs = {0.01, 0.05, 0.25, 0.50, 0.75, 0.95, 0.99};
  for (std::size_t i = 0; i < qs.size(); ++i) out[7 + i] = quantile_sorted(sorted, qs[i]);
  return out;
}

}  // namespace actimetry
