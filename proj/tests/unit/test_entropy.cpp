#include <doctest.h>

#include <numeric>

#include <actimetry/entropy.hpp>
#include <actimetry/error.hpp>
#include <actimetry/missing.hpp>
#include <actimetry/rng.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace actimetry;

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_SUITE("entropy") {
  TEST_CASE("degenerate inputs are zero") {
    const std::vector<double> c(60, 4.0);
    CHECK(perm_entropy(c, 3, 1) == 0.0);
    CHECK(fuzzy_entropy(c, 2, 0.2, 2, 1) == 0.0);
    CHECK(dist_entropy(c, 2, 64) == 0.0);
    CHECK(svd_entropy(c, 4, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(phase_entropy(c, 8, 1) == 0.0);

    std::vector<double> inc(50);
    std::iota(inc.begin(), inc.end(), 0.0);
    for (int m = 2; m <= 7; ++m) CHECK(perm_entropy(inc, m, 1) == 0.0);
  }

  TEST_CASE("maximal cases are one") {
    // Three templates with distances 1, 2, 3: one per bin.
    CHECK(dist_entropy(std::vector<double>{0, 1, 3}, 1, 3) == doctest::Approx(1.0).epsilon(1e-15));
    // Difference plot points in each of the four quadrants.
    CHECK(phase_entropy(std::vector<double>{0, 1, 2, 1, 0, 1}, 4, 1) == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("too-short segments are missing") {
    CHECK(is_missing(perm_entropy(std::vector<double>{1, 2, 3}, 3, 1)));
    CHECK(is_missing(fuzzy_entropy(std::vector<double>{1, 2, 3}, 2, 0.2, 2, 1)));
    CHECK(is_missing(dist_entropy(std::vector<double>{1, 2}, 2, 64)));
    CHECK(is_missing(svd_entropy(std::vector<double>{1, 2}, 3, 1)));
    CHECK(is_missing(phase_entropy(std::vector<double>{1, 2, 3, 4}, 8, 2)));
  }

  TEST_CASE("parameter validation") {
    const auto x = fixture::random_vector(30, 1);
    CHECK_THROWS_AS(perm_entropy(x, 0, 1), ConfigError);
    CHECK_THROWS_AS(fuzzy_entropy(x, 2, 0.0, 2, 1), ConfigError);
    CHECK_THROWS_AS(dist_entropy(x, 2, 1), ConfigError);
    CHECK_THROWS_AS(phase_entropy(x, 1, 1), ConfigError);
  }

  TEST_CASE("perm_entropy matches pattern-count oracle") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto x = fixture::random_vector(60 + seed * 30, seed);
      for (auto& v : x) v = std::round(v * 6);  // plenty of ties
      for (int m = 2; m <= 6; ++m) {
        for (int tau : {1, 2}) CHECK(close(perm_entropy(x, m, tau), oracle::perm_entropy(x, m, tau), 1e-12));
      }
    }
  }

  TEST_CASE("perm_entropy of iid uniform noise approaches one") {
    const auto x = fixture::random_vector(10000, 2024);
    CHECK(perm_entropy(x, 3, 1) > 0.99);
  }

  TEST_CASE("perm_entropy is invariant under monotone maps") {
    const auto x = fixture::random_vector(300, 3, 0.1, 5);
    std::vector<double> y;
    for (double v : x) y.push_back(std::exp(2 * v) + std::cbrt(v));
    for (int m = 3; m <= 7; ++m) CHECK(perm_entropy(x, m, 1) == perm_entropy(y, m, 1));
  }

  TEST_CASE("fuzzy_entropy matches double-loop oracle") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const auto x = fixture::random_vector(50, seed, 0, 10);
      CHECK(close(fuzzy_entropy(x, 2, 0.2, 2, 1), oracle::fuzzy_entropy(x, 2, 0.2, 2, 1), 1e-9));
      CHECK(close(fuzzy_entropy(x, 1, 0.15, 3, 2), oracle::fuzzy_entropy(x, 1, 0.15, 3, 2), 1e-9));
    }
  }

  TEST_CASE("fuzzy_entropy grid equals individual calls") {
    const auto x = fixture::random_walk(200, 9);
    const double rs[] = {0.1, 0.2, 0.3};
    const auto g = fuzzy_entropy_grid(x, 2, rs, 2, 1);
    for (std::size_t i = 0; i < 3; ++i) CHECK(g[i] == fuzzy_entropy(x, 2, rs[i], 2, 1));
  }

  TEST_CASE("fuzzy_entropy is invariant under positive affine maps") {
    const auto x = fixture::random_vector(150, 12, 0, 10);
    std::vector<double> y;
    for (double v : x) y.push_back(3 * v + 7);
    for (int m : {1, 2}) {
      const double a = fuzzy_entropy(x, m, 0.2, 2, 1);
      const double b = fuzzy_entropy(y, m, 0.2, 2, 1);
      CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)));
    }
  }

  TEST_CASE("dist_entropy matches histogram oracle") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const auto x = fixture::random_vector(120, seed * 5, 0, 10);
      for (int bins : {64, 128, 1024}) {
        for (int m : {2, 3}) CHECK(close(dist_entropy(x, m, bins), oracle::dist_entropy(x, m, bins), 1e-9));
      }
    }
  }

  TEST_CASE("singular values match dense SVD") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
      const int rows = 3 + static_cast<int>(rng.uniform_int(0, 60));
      const int cols = 1 + static_cast<int>(rng.uniform_int(0, 6));
      std::vector<double> a(static_cast<std::size_t>(rows * cols));
      for (auto& v : a) v = rng.normal();
      const auto s = singular_values(a, static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
      const auto o = oracle::singular_values(a, rows, cols);
      REQUIRE(s.size() == static_cast<std::size_t>(cols));
      for (int i = 0; i < std::min(rows, cols); ++i) CHECK(close(s[i], o[i], 1e-10 * std::max(1.0, o[0])));
    }
  }

  TEST_CASE("svd_entropy matches dense SVD oracle") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      const auto x = fixture::random_walk(100 + seed * 40, seed);
      for (int m = 3; m <= 7; ++m) {
        for (int tau : {1, 2}) CHECK(close(svd_entropy(x, m, tau), oracle::svd_entropy(x, m, tau), 1e-8));
      }
    }
  }

  TEST_CASE("svd_entropy of iid noise is near one after centring") {
    Rng rng(5000);
    std::vector<double> x(5000);
    for (auto& v : x) v = rng.normal();
    const double h = svd_entropy(x, 4, 1);
    CHECK(h > 0.95);
    CHECK(h <= 1.0);
    CHECK(close(h, oracle::svd_entropy(x, 4, 1), 1e-8));
  }

  TEST_CASE("phase_entropy matches angle-histogram oracle") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      const auto x = fixture::random_walk(300, seed);
      for (int sectors : {4, 16, 64}) {
        for (int tau : {1, 2}) {
          CHECK(close(phase_entropy(x, sectors, tau), oracle::phase_entropy(x, sectors, tau), 1e-9));
        }
      }
    }
  }

  TEST_CASE("phase_entropy: axis and diagonal steps open their sector") {
    // (1,0) (0,1) (-1,0) (0,-1) (1,1) (-1,-1): angles 0, 90, 180, 270, 45, 225 degrees
    const std::vector<double> x = {0, 1, 1, 2, 2, 1, 1, 0, 0, 1, 2, 1, 0};
    CHECK(phase_entropy(x, 8, 1) == doctest::Approx(oracle::phase_entropy(x, 8, 1)).epsilon(1e-15));
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      auto v = fixture::random_vector(400, seed, 0, 6);
      for (auto& e : v) e = std::floor(e);
      for (int sectors : {4, 8, 16, 32, 64}) {
        CHECK(close(phase_entropy(v, sectors, 1), oracle::phase_entropy(v, sectors, 1), 1e-12));
      }
    }
  }

  TEST_CASE("all entropies are normalized") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto x = fixture::random_vector(250, seed);
      for (double h : {perm_entropy(x, 4, 1), dist_entropy(x, 2, 128), svd_entropy(x, 5, 1),
                       phase_entropy(x, 16, 1)}) {
        CHECK(h >= 0.0);
        CHECK(h <= 1.0 + 1e-12);
      }
      CHECK(fuzzy_entropy(x, 2, 0.2, 2, 1) >= 0.0);
    }
  }

  TEST_CASE("entropies ignore the segment's position in time") {
    const auto long_series = fixture::random_walk(900, 31);
    const std::span<const double> all(long_series);
    const std::vector<double> segment(long_series.begin() + 300, long_series.begin() + 500);
    const auto view = all.subspan(300, 200);
    CHECK(perm_entropy(view, 5, 2) == perm_entropy(segment, 5, 2));
    CHECK(fuzzy_entropy(view, 2, 0.2, 2, 1) == fuzzy_entropy(segment, 2, 0.2, 2, 1));
    CHECK(dist_entropy(view, 3, 256) == dist_entropy(segment, 3, 256));
    CHECK(svd_entropy(view, 6, 1) == svd_entropy(segment, 6, 1));
    CHECK(phase_entropy(view, 32, 2) == phase_entropy(segment, 32, 2));
  }
}
