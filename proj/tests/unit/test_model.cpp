#include <doctest.h>

#include <cmath>
#include <numeric>

#include <actimetry/error.hpp>
#include <actimetry/missing.hpp>
#include <actimetry/model.hpp>
#include <actimetry/rng.hpp>

#include "oracles.hpp"

using namespace actimetry;

namespace {

ModelData make_data(const std::vector<std::vector<double>>& rows, std::vector<int> y,
                    std::vector<std::string> columns) {
  ModelData d;
  d.x = Matrix::from_rows(rows);
  d.y = std::move(y);
  d.columns = std::move(columns);
  for (std::size_t i = 0; i < d.y.size(); ++i) d.participant_ids.push_back("S" + std::to_string(i));
  return d;
}

std::vector<std::vector<double>> to_rows(const Matrix& m) {
  std::vector<std::vector<double>> out;
  for (std::size_t r = 0; r < m.rows(); ++r) out.emplace_back(m.row(r).begin(), m.row(r).end());
  return out;
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("mean imputation") {
    const auto m = Matrix::from_rows({{1.0}, {2.0}, {kMissing}, {3.0}});
    const auto p = fit_imputer(m);
    REQUIRE(p.means.size() == 1);
    CHECK(p.means[0] == 2.0);
    const auto out = apply_imputer(p, m);
    CHECK(out(2, 0) == 2.0);
    CHECK(out(0, 0) == 1.0);
  }

  TEST_CASE("imputation without missing values is the identity") {
    const auto m = Matrix::from_rows({{1, 5}, {2, 6}, {3, 7}});
    CHECK(apply_imputer(fit_imputer(m), m) == m);
  }

  TEST_CASE("imputation with three missing cells matches a hand mean") {
    std::vector<std::vector<double>> rows;
    double sum = 0;
    for (int i = 0; i < 78; ++i) {
      const double v = i < 3 ? kMissing : 15.0 + (i * 37 % 70);
      if (i >= 3) sum += v;
      rows.push_back({v, static_cast<double>(i)});
    }
    const auto m = Matrix::from_rows(rows);
    const auto p = fit_imputer(m);
    CHECK(p.means[0] == doctest::Approx(sum / 75).epsilon(1e-14));
    const auto out = apply_imputer(p, m);
    for (int i = 0; i < 3; ++i) CHECK(out(i, 0) == p.means[0]);
  }

  TEST_CASE("a column with no observed values is dropped") {
    const auto m = Matrix::from_rows({{1, kMissing, 4}, {2, kMissing, 5}});
    const auto p = fit_imputer(m);
    CHECK(p.kept == std::vector<std::size_t>{0, 2});
    CHECK(p.dropped == std::vector<std::size_t>{1});
    const auto out = apply_imputer(p, m);
    CHECK(out.cols() == 2);
    CHECK(out(1, 1) == 5.0);
  }

  TEST_CASE("min-max scaling") {
    const auto m = Matrix::from_rows({{0, 3}, {5, 3}, {10, 3}});
    const auto s = apply_scaler(fit_scaler(m), m);
    CHECK(s(0, 0) == 0.0);
    CHECK(s(1, 0) == 0.5);
    CHECK(s(2, 0) == 1.0);
    for (std::size_t r = 0; r < 3; ++r) CHECK(s(r, 1) == 0.0);

    const auto scaled = minmax_scale(Matrix::from_rows({{2}, {6}}), Matrix::from_rows({{8}}));
    CHECK(scaled.apply(0, 0) == 1.5);
  }

  TEST_CASE("knn exact match and unanimous labels") {
    const auto train = Matrix::from_rows({{0, 0}, {1, 1}, {5, 5}});
    const std::vector<int> labels = {3, 1, 2};
    const std::vector<double> q = {5, 5};
    CHECK(knn_predict(train, labels, q, 1) == 2);
    const std::vector<int> same = {7, 7, 7};
    CHECK(knn_predict(train, same, q, 3) == 7);
    CHECK_THROWS_AS(knn_predict(train, labels, q, 4), ConfigError);
  }

  TEST_CASE("knn ties: vote ties go to the smallest label") {
    const auto train = Matrix::from_rows({{-1}, {1}});
    const std::vector<int> labels = {4, 2};
    const std::vector<double> q = {0};
    CHECK(knn_predict(train, labels, q, 2) == 2);
  }

  TEST_CASE("knn matches the brute-force oracle") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::vector<double>> rows(6 + rng.uniform_int(0, 20), std::vector<double>(2));
      std::vector<int> labels;
      for (auto& r : rows) {
        r = {std::round(rng.uniform(0, 4)), std::round(rng.uniform(0, 4))};
        labels.push_back(static_cast<int>(rng.uniform_int(0, 2)));
      }
      const std::vector<double> q = {std::round(rng.uniform(0, 4)), std::round(rng.uniform(0, 4))};
      const int k = 1 + 2 * static_cast<int>(rng.uniform_int(0, 2));
      CHECK(knn_predict(Matrix::from_rows(rows), labels, q, k) == oracle::knn(rows, labels, q, k));
    }
  }

  TEST_CASE("loocv predictions are invariant to per-feature rescaling") {
    Rng rng(8);
    std::vector<std::vector<double>> rows, scaled;
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) {
      const double a = rng.uniform(), b = rng.uniform();
      rows.push_back({a, b});
      scaled.push_back({1000 * a - 3, 0.01 * b + 9});
      y.push_back(a + b > 1 ? 1 : 0);
    }
    const ModelConfig cfg;
    CHECK(loocv_predictions(Matrix::from_rows(rows), y, cfg) ==
          loocv_predictions(Matrix::from_rows(scaled), y, cfg));
  }

  TEST_CASE("loocv with the label as a feature is perfect") {
    std::vector<std::vector<double>> rows;
    std::vector<int> y;
    for (int i = 0; i < 30; ++i) {
      y.push_back(1 + i % 4);
      rows.push_back({static_cast<double>(y.back())});
    }
    const auto r = loocv(Matrix::from_rows(rows), y, {});
    CHECK(r.mcc == 1.0);
    CHECK_FALSE(r.degenerate);
  }

  TEST_CASE("loocv on shuffled labels is near chance") {
    Rng rng(78);
    std::vector<std::vector<double>> rows;
    std::vector<int> y;
    for (int i = 0; i < 78; ++i) {
      rows.push_back({rng.normal(), rng.normal(), rng.normal()});
      y.push_back(i < 10 ? 1 : 0);
    }
    for (std::size_t i = y.size() - 1; i > 0; --i) {
      std::swap(y[i], y[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
    }
    const auto r = loocv(Matrix::from_rows(rows), y, {});
    CHECK(std::abs(r.mcc) < 0.3);
  }

  TEST_CASE("loocv is deterministic and pools every sample once") {
    Rng rng(5);
    std::vector<std::vector<double>> rows;
    std::vector<int> y;
    for (int i = 0; i < 50; ++i) {
      rows.push_back({rng.uniform(), rng.uniform()});
      y.push_back(1 + i % 3);
    }
    const auto x = Matrix::from_rows(rows);
    const auto a = loocv(x, y, {});
    const auto b = loocv(x, y, {});
    CHECK(a.confusion == b.confusion);
    CHECK(a.mcc == b.mcc);
    for (std::size_t c = 0; c < 3; ++c) {
      const auto row = a.confusion.counts[c];
      CHECK(std::accumulate(row.begin(), row.end(), 0LL) == std::count(y.begin(), y.end(), c + 1));
    }
  }

  TEST_CASE("fold-safe preprocessing is fitted without the held-out row") {
    Rng rng(6);
    std::vector<std::vector<double>> rows;
    std::vector<int> y;
    for (int i = 0; i < 25; ++i) {
      rows.push_back({rng.uniform(0, 10), i % 5 == 0 ? kMissing : rng.uniform(-3, 3)});
      y.push_back(i % 2);
    }
    rows[4][0] = 500;  // outlier dominates global scaling
    const auto x = Matrix::from_rows(rows);
    ModelConfig cfg;
    cfg.k_neighbors = 3;
    const auto pred = loocv_predictions(x, y, cfg);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const auto train = x.without_row(i);
      std::vector<int> labels;
      for (std::size_t r = 0; r < y.size(); ++r) {
        if (r != i) labels.push_back(y[r]);
      }
      const auto prep = Preprocessor::fit(train);
      Matrix q(1, 2);
      q(0, 0) = x(i, 0);
      q(0, 1) = x(i, 1);
      CHECK(pred[i] == knn_predict(prep.transform(train), labels, prep.transform(q).row(0), 3));
    }
    const auto params = Preprocessor::fit(x.without_row(4));
    CHECK(params.scaler.max[0] < 10.0);
  }

  TEST_CASE("single-class labels are degenerate") {
    const auto r = loocv(Matrix::from_rows({{1}, {2}, {3}}), std::vector<int>{1, 1, 1}, {});
    CHECK(r.degenerate);
    CHECK(r.mcc == 0.0);
  }

  TEST_CASE("forward selection finds the one informative feature") {
    Rng rng(20);
    std::vector<std::string> cols;
    for (int c = 0; c < 20; ++c) cols.push_back("activity.mean.noise" + std::to_string(100 + c));
    cols.push_back("activity.mean.signal");
    std::vector<std::vector<double>> rows;
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) {
      y.push_back(i % 2);
      std::vector<double> r;
      for (int c = 0; c < 20; ++c) r.push_back(rng.uniform());
      r.push_back(y.back() * 10 + rng.uniform());
      rows.push_back(r);
    }
    ModelConfig cfg;
    cfg.k_neighbors = 3;
    const auto sel = forward_select(make_data(rows, y, cols), FeatureGroup::Activity, cfg);
    CHECK(sel.chosen_features == std::vector<std::string>{"activity.mean.signal"});
    CHECK(sel.trajectory.size() == 1);
    CHECK(sel.final_report.mcc == 1.0);
  }

  TEST_CASE("exhaustive search finds an interaction greedy search can miss") {
    // XOR of the two signs: no single feature separates the classes.
    Rng rng(12);
    std::vector<std::vector<double>> rows;
    std::vector<int> y;
    for (int i = 0; i < 48; ++i) {
      const double a = (i % 2 ? 1 : -1) * rng.uniform(0.3, 1);
      const double b = (i / 2 % 2 ? 1 : -1) * rng.uniform(0.3, 1);
      rows.push_back({a, b, rng.uniform(-1, 1)});
      y.push_back((a > 0) != (b > 0) ? 1 : 0);
    }
    const auto data = make_data(rows, y, {"rest.mean.a", "rest.mean.b", "rest.mean.c"});
    ModelConfig cfg;
    cfg.k_neighbors = 3;
    const auto ex = exhaustive_select(data, FeatureGroup::Rest, cfg, 2);
    CHECK(ex.chosen_features == std::vector<std::string>{"rest.mean.a", "rest.mean.b"});
    CHECK(ex.final_report.mcc == 1.0);
    const auto fw = forward_select(data, FeatureGroup::Rest, cfg);
    CHECK(fw.final_report.mcc <= ex.final_report.mcc);
  }

  TEST_CASE("forward selection: trajectory strictly increases after the first step") {
    Rng rng(9);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<std::vector<double>> rows;
      std::vector<int> y;
      for (int i = 0; i < 30; ++i) {
        y.push_back(i % 3);
        rows.push_back({rng.uniform() + 0.3 * y.back(), rng.uniform(), rng.uniform() + 0.2 * y.back(),
                        rng.uniform(), rng.uniform()});
      }
      const auto data = make_data(rows, y, {"a1", "a2", "a3", "a4", "a5"});
      ModelConfig cfg;
      cfg.k_neighbors = 3;
      cfg.selection_max_size = 4;
      const auto sel = forward_select(data, FeatureGroup::Subjective, cfg);
      REQUIRE(!sel.trajectory.empty());
      CHECK(sel.chosen_features.size() <= 4);
      for (std::size_t s = 1; s < sel.trajectory.size(); ++s) {
        CHECK(sel.trajectory[s].mcc > sel.trajectory[s - 1].mcc);
      }
      CHECK(sel.final_report.mcc == sel.trajectory.back().mcc);
      const auto ex = exhaustive_select(data, FeatureGroup::Subjective, cfg, 4);
      CHECK(ex.final_report.mcc >= sel.final_report.mcc);
    }
  }

  TEST_CASE("empty candidate pool is an error") {
    const auto data = make_data({{1}, {2}}, {0, 1}, {"rest.mean.x"});
    CHECK_THROWS_AS(forward_select(data, FeatureGroup::Activity, {}), ConfigError);
  }

  TEST_CASE("column groups") {
    CHECK(column_group("activity.mean.max") == FeatureGroup::Activity);
    CHECK(column_group("rest.std.cv") == FeatureGroup::Rest);
    CHECK(column_group("bmi_pct") == FeatureGroup::Subjective);
    CHECK(group_matches(FeatureGroup::Both, "rest.std.cv"));
    CHECK_FALSE(group_matches(FeatureGroup::Both, "age"));
    CHECK(group_matches(FeatureGroup::All, "age"));
    const auto data = make_data({{1, 2, 3}}, {0}, {"rest.b", "age", "activity.a"});
    CHECK(candidate_columns(data, FeatureGroup::Both) == std::vector<std::size_t>{2, 0});
  }

  TEST_CASE("k sweep: separable data prefers k=1") {
    std::vector<std::vector<double>> rows;
    std::vector<int> y;
    for (int i = 0; i < 20; ++i) {
      rows.push_back({i < 10 ? static_cast<double>(i) : 100.0 + i});
      y.push_back(i < 10 ? 0 : 1);
    }
    const auto s = sweep_k(Matrix::from_rows(rows), y, {});
    CHECK(s.best_k == 1);
    CHECK(s.mcc_by_k.size() == ModelConfig{}.k_grid.size());
  }

  TEST_CASE("k sweep: a mislabelled point favours larger k") {
    std::vector<std::vector<double>> rows;
    std::vector<int> y;
    for (int i = 0; i < 10; ++i) {
      rows.push_back({static_cast<double>(i)});
      y.push_back(0);
    }
    rows.push_back({4.5});
    y.push_back(1);
    for (int i = 10; i < 20; ++i) {
      rows.push_back({static_cast<double>(i)});
      y.push_back(1);
    }
    ModelConfig cfg;
    cfg.k_grid = {1, 3, 5};
    const auto s = sweep_k(Matrix::from_rows(rows), y, cfg);
    CHECK(s.best_k > 1);
  }

  TEST_CASE("config parsing and validation") {
    CHECK(leakage_mode_from_string("fold_safe") == LeakageMode::FoldSafe);
    CHECK(target_from_string("SC") == Target::SC);
    CHECK(feature_group_from_string("activity") == FeatureGroup::Activity);
    CHECK_THROWS_AS(target_from_string("XX"), ConfigError);
    ModelConfig cfg;
    cfg.k_neighbors = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }

  TEST_CASE("rows round trip through Matrix") {
    const std::vector<std::vector<double>> rows = {{1, 2}, {3, 4}, {5, 6}};
    const auto m = Matrix::from_rows(rows);
    CHECK(to_rows(m) == rows);
    CHECK(to_rows(m.without_row(1)) == std::vector<std::vector<double>>{{1, 2}, {5, 6}});
    const std::vector<std::size_t> cols = {1};
    CHECK(to_rows(m.select_columns(cols)) == std::vector<std::vector<double>>{{2}, {4}, {6}});
  }
}
