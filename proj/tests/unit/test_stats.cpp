#include <doctest.h>

#include <numeric>

#include <actimetry/missing.hpp>
#include <actimetry/stats.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace actimetry;

TEST_SUITE("stats") {
  TEST_CASE("constant segment") {
    const std::vector<double> c(40, 6.5);
    const auto f = stat_features(c);
    CHECK(f[0] == 6.5);
    CHECK(f[1] == 6.5);
    CHECK(f[2] == 6.5);
    CHECK(f[3] == 0.0);
    CHECK(f[4] == 0.0);
    CHECK(f[5] == 0.0);
    CHECK(f[6] == 0.0);
    for (std::size_t i = 7; i < kStatFeatureCount; ++i) CHECK(f[i] == 6.5);
  }

  TEST_CASE("percentiles of 0..100 are exact") {
    std::vector<double> v(101);
    std::iota(v.begin(), v.end(), 0.0);
    const auto f = stat_features(v);
    CHECK(f[7] == 1.0);
    CHECK(f[8] == 5.0);
    CHECK(f[9] == 25.0);
    CHECK(f[10] == 50.0);
    CHECK(f[11] == 75.0);
    CHECK(f[12] == 95.0);
    CHECK(f[13] == 99.0);
  }

  TEST_CASE("random segments match the sort-based oracle") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      const auto n = static_cast<std::size_t>(2 + seed * 37 % 400);
      const auto x = fixture::random_vector(n, seed, -5, 120);
      const auto f = stat_features(x);
      const auto o = oracle::stats(x);
      for (std::size_t i = 0; i < kStatFeatureCount; ++i) {
        CHECK(std::abs(f[i] - o[i]) <= 1e-9 * std::max(1.0, std::abs(o[i])));
      }
    }
  }

  TEST_CASE("cv is missing only when the mean is zero") {
    const auto f = stat_features(std::vector<double>{-1.0, 1.0});
    CHECK(is_missing(f[6]));
    CHECK_FALSE(is_missing(f[4]));
    CHECK(f[4] == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("fewer than two values are missing") {
    for (double v : stat_features(std::vector<double>{3.0})) CHECK(is_missing(v));
    for (double v : stat_features(std::vector<double>{})) CHECK(is_missing(v));
  }

  TEST_CASE("translation in time leaves statistics unchanged") {
    auto x = fixture::random_vector(200, 8, 0, 50);
    const auto a = stat_features(x);
    std::rotate(x.begin(), x.begin() + 77, x.end());
    const auto b = stat_features(x);
    for (std::size_t i = 0; i < kStatFeatureCount; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  }
}
