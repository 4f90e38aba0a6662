#include <doctest.h>

#include <algorithm>
#include <numeric>

#include <actimetry/error.hpp>
#include <actimetry/metrics.hpp>
#include <actimetry/rng.hpp>

#include "fixtures.hpp"

using namespace actimetry;

namespace {

// Direct transcription of the R_K formula over the K x K counts.
double rk_reference(const std::vector<std::vector<long long>>& c) {
  const std::size_t k = c.size();
  double num = 0, s = 0;
  std::vector<double> t(k, 0), p(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      t[i] += c[i][j];
      p[j] += c[i][j];
      s += c[i][j];
    }
  }
  double trace = 0;
  for (std::size_t i = 0; i < k; ++i) trace += c[i][i];
  num = trace * s;
  double sp = 0, pp = 0, tt = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sp += p[i] * t[i];
    pp += p[i] * p[i];
    tt += t[i] * t[i];
  }
  const double d = std::sqrt((s * s - pp) * (s * s - tt));
  return d == 0 ? 0 : (num - sp) / d;
}

ConfusionMatrix random_matrix(Rng& rng, int k) {
  std::vector<int> labels(k);
  std::iota(labels.begin(), labels.end(), 1);
  std::vector<std::vector<long long>> c(k, std::vector<long long>(k));
  for (auto& row : c) {
    for (auto& v : row) v = rng.uniform_int(0, 20);
  }
  return ConfusionMatrix(labels, c);
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("binary reference matrix") {
    const auto r = make_report(fixture::fa_reference());
    CHECK(std::abs(r.mcc - 0.8816) <= 0.0005);
    CHECK(std::abs(r.accuracy - 0.974) <= 0.001);
    CHECK(std::abs(r.per_class[1].sensitivity - 0.8) <= 1e-12);
    CHECK(r.per_class[1].specificity == 1.0);
    CHECK(std::abs(r.per_class[1].f1 - 0.889) <= 0.001);
    CHECK(mcc_binary(8, 68, 0, 2) == doctest::Approx(r.mcc).epsilon(1e-15));
  }

  TEST_CASE("four-class reference matrix A") {
    const auto cm = fixture::sc_reference_a();
    const auto r = make_report(cm);
    CHECK(std::abs(r.mcc - 0.51) <= 0.005);
    CHECK(std::abs(r.accuracy - 51.0 / 78.0) <= 1e-12);
    const auto printed = fixture::sc_reference_a_rows();
    for (std::size_t c = 0; c < 4; ++c) {
      CHECK(std::abs(r.per_class[c].sensitivity - printed[c].sensitivity) <= 0.001);
      CHECK(std::abs(r.per_class[c].specificity - printed[c].specificity) <= 0.001);
      CHECK(std::abs(r.per_class[c].f1 - printed[c].f1) <= 0.001);
    }
  }

  TEST_CASE("four-class reference matrix B") {
    const auto r = make_report(fixture::sc_reference_b());
    CHECK(std::abs(r.mcc - 0.46) <= 0.005);
    CHECK(std::abs(r.accuracy - 0.615) <= 0.005);
    const auto printed = fixture::sc_reference_b_rows();
    for (std::size_t c = 0; c < 4; ++c) {
      CHECK(std::abs(r.per_class[c].sensitivity - printed[c].sensitivity) <= 0.001);
      CHECK(std::abs(r.per_class[c].specificity - printed[c].specificity) <= 0.001);
      CHECK(std::abs(r.per_class[c].f1 - printed[c].f1) <= 0.001);
    }
  }

  TEST_CASE("trivial MCC cases") {
    CHECK(mcc(ConfusionMatrix({0, 1}, {{10, 0}, {0, 5}})) == 1.0);
    CHECK(mcc(ConfusionMatrix({0, 1}, {{10, 0}, {5, 0}})) == 0.0);
    CHECK(mcc(ConfusionMatrix({0, 1}, {{0, 10}, {0, 5}})) == 0.0);
    CHECK(mcc(ConfusionMatrix({1, 2, 3, 4}, {{3, 0, 0, 0}, {0, 3, 0, 0}, {0, 0, 3, 0}, {0, 0, 0, 3}})) == 1.0);
    CHECK(mcc(ConfusionMatrix({1, 2, 3}, {{4, 0, 0}, {4, 0, 0}, {4, 0, 0}})) == 0.0);
    CHECK(mcc(ConfusionMatrix({0, 1}, {{0, 5}, {5, 0}})) == -1.0);
  }

  TEST_CASE("binary and multiclass forms agree on 2x2") {
    Rng rng(2);
    for (int i = 0; i < 500; ++i) {
      const auto cm = random_matrix(rng, 2);
      CHECK(std::abs(mcc_binary(cm) - mcc_multiclass(cm)) <= 1e-12);
    }
  }

  TEST_CASE("multiclass matches the reference formula") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
      const auto cm = random_matrix(rng, 2 + static_cast<int>(rng.uniform_int(0, 4)));
      CHECK(std::abs(mcc_multiclass(cm) - rk_reference(cm.counts)) <= 1e-12);
    }
  }

  TEST_CASE("MCC is invariant under class relabelling") {
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
      const int k = 2 + static_cast<int>(rng.uniform_int(0, 3));
      const auto cm = random_matrix(rng, k);
      std::vector<std::size_t> perm(k);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      for (int s = k; s > 1; --s) std::swap(perm[s - 1], perm[rng.uniform_int(0, s - 1)]);
      std::vector<std::vector<long long>> c(k, std::vector<long long>(k));
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) c[perm[a]][perm[b]] = cm.counts[a][b];
      }
      CHECK(std::abs(mcc(ConfusionMatrix(cm.labels, c)) - mcc(cm)) <= 1e-12);
    }
  }

  TEST_CASE("confusion from predictions") {
    const std::vector<int> actual = {1, 1, 2, 3, 3, 3};
    const std::vector<int> pred = {1, 2, 2, 3, 1, 3};
    const auto cm = ConfusionMatrix::from_predictions(actual, pred);
    CHECK(cm.labels == std::vector<int>{1, 2, 3});
    CHECK(cm.total() == 6);
    CHECK(cm.trace() == 4);
    CHECK(cm.counts[2][0] == 1);
    const auto m = confusion_metrics(cm);
    CHECK(m.accuracy == doctest::Approx(4.0 / 6.0));
    CHECK(m.per_class.size() == 3);
  }

  TEST_CASE("zero-over-zero ratios are zero") {
    const auto m = confusion_metrics(ConfusionMatrix({0, 1}, {{5, 0}, {0, 0}}));
    CHECK(m.per_class[1].sensitivity == 0.0);
    CHECK(m.per_class[1].precision == 0.0);
    CHECK(m.per_class[1].f1 == 0.0);
    const auto r = make_report(ConfusionMatrix({0, 1}, {{5, 0}, {0, 0}}));
    CHECK(r.degenerate);
    CHECK(r.mcc == 0.0);
  }

  TEST_CASE("invalid matrices are rejected") {
    CHECK_THROWS_AS(ConfusionMatrix({0, 1}, {{1, 2}}), ConfigError);
    CHECK_THROWS_AS(ConfusionMatrix({0, 1}, {{1, -2}, {0, 0}}), ConfigError);
    ConfusionMatrix cm({0, 1});
    CHECK_THROWS_AS(cm.add(0, 7), ConfigError);
  }
}
