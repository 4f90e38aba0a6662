#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <actimetry/ingest.hpp>
#include <actimetry/metrics.hpp>
#include <actimetry/rng.hpp>

namespace fixture {

inline actimetry::ActigramSeries series_from(const std::vector<double>& counts,
                                             const std::string& id = "P01") {
  actimetry::ActigramSeries s;
  s.participant_id = id;
  s.start_time = actimetry::parse_timestamp("2019-02-04T07:00:00", "fixture");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    s.epochs.push_back({static_cast<std::int64_t>(i), counts[i]});
  }
  return s;
}

// Days of `active` minutes at `level` followed by rest at zero, plus
// optional Gaussian noise clipped at zero.
inline std::vector<double> square_wave(int days, int active, double level, double noise_sd = 0.0,
                                       std::uint64_t seed = 1) {
  actimetry::Rng rng(seed);
  std::vector<double> v;
  for (int d = 0; d < days; ++d) {
    for (int m = 0; m < 1440; ++m) {
      double x = m < active ? level : 0.0;
      if (noise_sd > 0) x = std::max(0.0, x + noise_sd * rng.normal());
      v.push_back(x);
    }
  }
  return v;
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo = 0.0,
                                         double hi = 1.0) {
  actimetry::Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline std::vector<double> random_walk(std::size_t n, std::uint64_t seed) {
  actimetry::Rng rng(seed);
  std::vector<double> v(n);
  double level = 0.0;
  for (auto& x : v) {
    level += rng.normal();
    x = level;
  }
  return v;
}

// Reference confusion matrices, rows actual, columns predicted.
inline actimetry::ConfusionMatrix fa_reference() {
  return actimetry::ConfusionMatrix({0, 1}, {{68, 0}, {2, 8}});
}

inline actimetry::ConfusionMatrix sc_reference_a() {
  return actimetry::ConfusionMatrix({1, 2, 3, 4},
                                    {{27, 3, 0, 3}, {4, 11, 0, 1}, {9, 3, 3, 0}, {3, 1, 0, 10}});
}

inline actimetry::ConfusionMatrix sc_reference_b() {
  return actimetry::ConfusionMatrix({1, 2, 3, 4},
                                    {{31, 0, 1, 1}, {9, 6, 0, 1}, {11, 1, 1, 2}, {4, 0, 0, 10}});
}

struct PrintedClassRow {
  double sensitivity;
  double specificity;
  double f1;
};

inline std::vector<PrintedClassRow> sc_reference_a_rows() {
  return {{0.818, 0.644, 0.710}, {0.687, 0.887, 0.647}, {0.200, 1.000, 0.333}, {0.714, 0.937, 0.714}};
}

inline std::vector<PrintedClassRow> sc_reference_b_rows() {
  return {{0.939, 0.466, 0.704}, {0.375, 0.983, 0.521}, {0.066, 0.984, 0.117}, {0.714, 0.937, 0.714}};
}

}  // namespace fixture
