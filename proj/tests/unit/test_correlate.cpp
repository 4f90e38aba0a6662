#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include <actimetry/correlate.hpp>
#include <actimetry/error.hpp>
#include <actimetry/missing.hpp>
#include <actimetry/rng.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace actimetry;

namespace {

std::vector<double> standardized(std::vector<double> v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0;
  for (auto& x : v) {
    x -= m;
    ss += x * x;
  }
  for (auto& x : v) x /= std::sqrt(ss);
  return v;
}

// Pair of length-n samples whose sample correlation is exactly `r` up to rounding.
std::pair<std::vector<double>, std::vector<double>> planted_pair(std::size_t n, double r, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n), e(n);
  for (auto& v : x) v = rng.normal();
  for (auto& v : e) v = rng.normal();
  x = standardized(x);
  e = standardized(e);
  const double proj = std::inner_product(x.begin(), x.end(), e.begin(), 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i] -= proj * x[i];
  e = standardized(e);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = r * x[i] + std::sqrt(1 - r * r) * e[i];
  return {x, y};
}

}  // namespace

TEST_SUITE("correlate") {
  TEST_CASE("perfect linear relation") {
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) {
      x.push_back(i);
      y.push_back(2 * i + 1);
    }
    const auto c = pearson_r(x, y);
    CHECK(c.r == 1.0);
    CHECK(c.p < 0.01);
    CHECK(c.stars == Stars::P01);
    CHECK(c.n == 20);
  }

  TEST_CASE("orthogonal samples give zero") {
    const std::vector<double> x = {-1, 1, -1, 1};
    const std::vector<double> y = {-1, -1, 1, 1};
    const auto c = pearson_r(x, y);
    CHECK(c.r == 0.0);
    CHECK(c.p == doctest::Approx(1.0));
    CHECK(c.stars == Stars::None);
  }

  TEST_CASE("symmetry, affine invariance and sign flip") {
    const auto x = fixture::random_vector(60, 1, 0, 10);
    auto y = fixture::random_vector(60, 2, 0, 10);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.5 * x[i];
    const auto a = pearson_r(x, y);
    CHECK(pearson_r(y, x).r == doctest::Approx(a.r).epsilon(1e-14));
    std::vector<double> xa, xn;
    for (double v : x) {
      xa.push_back(4 * v - 11);
      xn.push_back(-v);
    }
    CHECK(pearson_r(xa, y).r == doctest::Approx(a.r).epsilon(1e-12));
    CHECK(pearson_r(xn, y).r == doctest::Approx(-a.r).epsilon(1e-12));
    CHECK(pearson_r(xn, y).p == doctest::Approx(a.p).epsilon(1e-10));
  }

  TEST_CASE("agrees with the extended-precision oracle") {
    Rng rng(10);
    for (int trial = 0; trial < 50; ++trial) {
      const auto n = static_cast<std::size_t>(rng.uniform_int(5, 200));
      const double rho = rng.uniform(-0.9, 0.9);
      const auto [x, y] = planted_pair(n, rho, 100 + static_cast<std::uint64_t>(trial));
      std::vector<double> xs(x), ys(y);
      for (std::size_t i = 0; i < n; ++i) {
        xs[i] = 50 + 12 * xs[i] * std::sqrt(static_cast<double>(n));
        ys[i] = -3 + 0.4 * ys[i] * std::sqrt(static_cast<double>(n)) + 0.01 * rng.normal();
      }
      const auto got = pearson_r(xs, ys);
      const auto want = oracle::pearson(xs, ys);
      CHECK(std::abs(got.r - want.r) <= 1e-9);
      CHECK(std::abs(got.p - want.p) <= 1e-6);
    }
  }

  TEST_CASE("incomplete beta reference values") {
    CHECK(incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(incomplete_beta(2, 3, 0.0) == 0.0);
    CHECK(incomplete_beta(2, 3, 1.0) == 1.0);
    // I_x(a, 1) = x^a
    CHECK(incomplete_beta(3.5, 1, 0.6) == doctest::Approx(std::pow(0.6, 3.5)).epsilon(1e-13));
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
    CHECK(incomplete_beta(4, 7, 0.2) == doctest::Approx(1 - incomplete_beta(7, 4, 0.8)).epsilon(1e-13));
    // t with one degree of freedom is Cauchy: p = 1 - 2 atan(t) / pi
    CHECK(student_t_two_tailed(1.0, 1) == doctest::Approx(0.5).epsilon(1e-13));
  }

  TEST_CASE("planted correlation at n=78 is significant at 1%") {
    const auto [x, y] = planted_pair(78, 0.303, 7);
    const auto c = pearson_r(x, y);
    CHECK(c.r == doctest::Approx(0.303).epsilon(1e-12));
    CHECK(c.stars == Stars::P01);
  }

  TEST_CASE("significance thresholds at n=78") {
    // Critical |r| is about 0.223 at 5% and 0.290 at 1% on 76 degrees of freedom.
    const struct {
      double r;
      Stars stars;
    } cases[] = {{0.20, Stars::None}, {0.25, Stars::P05}, {-0.25, Stars::P05},
                 {0.28, Stars::P05},  {0.30, Stars::P01}, {-0.42, Stars::P01}};
    for (const auto& c : cases) {
      const auto [x, y] = planted_pair(78, c.r, 3);
      CHECK(pearson_r(x, y).stars == c.stars);
    }
  }

  TEST_CASE("missing values are removed pairwise") {
    std::vector<double> x = {1, 2, kMissing, 4, 5, 6};
    std::vector<double> y = {2, 4, 100, kMissing, 10, 12};
    const auto c = pearson_r(x, y);
    CHECK(c.n == 4);
    CHECK(c.r == doctest::Approx(1.0));
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(pearson_r(std::vector<double>{1, 2}, std::vector<double>{3, 4}), InsufficientDataError);
    CHECK_THROWS_AS(pearson_r(std::vector<double>{1, 1, 1}, std::vector<double>{3, 4, 5}),
                    UndefinedCorrelationError);
    CHECK_THROWS_AS(pearson_r(std::vector<double>{1, 2, 3}, std::vector<double>{3, 4}), ConfigError);
  }

  TEST_CASE("correlation table shape and CSV") {
    std::vector<SubjectRecord> subjects;
    FeatureTable ft;
    ft.columns = {"activity.mean.max", "rest.std.cv", "rest.mean.perm_en.m3_tau1"};
    const auto [x, y] = planted_pair(30, 0.8, 11);
    for (int i = 0; i < 30; ++i) {
      SubjectRecord s;
      s.participant_id = "S" + std::to_string(i);
      s.bmi_pct = y[i];
      s.zsdsi = 40;  // constant
      s.debq_restr = x[i];
      s.debq_extern = (i * 7) % 11;
      s.debq_emo = (i * 5) % 13;
      subjects.push_back(s);
      ft.participant_ids.push_back(s.participant_id);
      ft.rows.push_back({x[i], kMissing, static_cast<double>((i * 3) % 7)});
    }
    const std::vector<std::string> selected = {"activity.mean.max", "rest.std.cv",
                                               "rest.mean.perm_en.m3_tau1"};
    const auto t = correlation_table(ft, subjects, selected);
    REQUIRE(t.cells.size() == 3);
    for (const auto& row : t.cells) CHECK(row.size() == 5);
    CHECK(t.subjective == correlation_subjective_columns());
    REQUIRE(t.cells[0][0]);
    CHECK(t.cells[0][0]->r == doctest::Approx(0.8).epsilon(1e-12));
    CHECK_FALSE(t.cells[0][1]);  // constant questionnaire score
    for (const auto& cell : t.cells[1]) CHECK_FALSE(cell);
    REQUIRE(t.cells[0][2]);
    CHECK(t.cells[0][2]->r == doctest::Approx(1.0));

    std::ostringstream out;
    write_correlation_csv(out, t);
    std::istringstream in(out.str());
    std::string header, line0, line1;
    std::getline(in, header);
    std::getline(in, line0);
    std::getline(in, line1);
    CHECK(header == "group,aggregation,method,bmi_pct,zsdsi,debq_restr,debq_extern,debq_emo");
    CHECK(line0.starts_with("activity,mean,max,0.800**,n/a,1.000**,"));
    CHECK(line1 == "rest,std,cv,n/a,n/a,n/a,n/a,n/a");
  }
}
