#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "actimetry/features.hpp"
#include "actimetry/ingest.hpp"
#include "actimetry/metrics.hpp"

namespace actimetry {

/// Dense row-major matrix; NaN entries are missing values.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }

  Matrix select_columns(std::span<const std::size_t> cols) const;
  Matrix without_row(std::size_t r) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class LeakageMode { FoldSafe, Global };
enum class Target { FA, SC };
enum class FeatureGroup { Activity, Rest, Both, Subjective, All };

const char* to_string(LeakageMode m);
const char* to_string(Target t);
const char* to_string(FeatureGroup g);
LeakageMode leakage_mode_from_string(std::string_view s);
Target target_from_string(std::string_view s);
FeatureGroup feature_group_from_string(std::string_view s);

struct ModelConfig {
  int k_neighbors = 5;
  std::vector<int> k_grid = {1, 3, 5, 7, 9, 11, 15};
  LeakageMode leakage = LeakageMode::FoldSafe;
  int selection_max_size = 5;
  Target target = Target::FA;

  void validate() const;
};

struct ImputerParams {
  std::vector<std::size_t> kept;     // source columns retained, in order
  std::vector<std::size_t> dropped;  // columns with no observed training value
  std::vector<double> means;         // per kept column
};

ImputerParams fit_imputer(const Matrix& train);
/// Keeps the retained columns and fills missing cells with training means.
Matrix apply_imputer(const ImputerParams& params, const Matrix& m);

struct Imputed {
  Matrix train;
  Matrix apply;
  ImputerParams params;
};
Imputed impute_mean(const Matrix& train, const Matrix& apply);

struct ScalerParams {
  std::vector<double> min;
  std::vector<double> max;
};

ScalerParams fit_scaler(const Matrix& train);
/// (v - min) / (max - min) without clipping; constant columns map to 0.
Matrix apply_scaler(const ScalerParams& params, const Matrix& m);

struct Scaled {
  Matrix train;
  Matrix apply;
  ScalerParams params;
};
Scaled minmax_scale(const Matrix& train, const Matrix& apply);

/// Imputer and scaler fitted together on one training split.
struct Preprocessor {
  ImputerParams imputer;
  ScalerParams scaler;

  static Preprocessor fit(const Matrix& train);
  Matrix transform(const Matrix& m) const;
};

/// Majority vote of the k Euclidean-nearest training rows. Equal distances
/// keep training-row order; equal votes go to the smallest class code.
int knn_predict(const Matrix& train, std::span<const int> labels, std::span<const double> query,
                int k);

/// Held-out prediction for every row under leave-one-out.
std::vector<int> loocv_predictions(const Matrix& x, std::span<const int> y, const ModelConfig& cfg);

/// Pools all leave-one-out predictions into one confusion matrix.
EvalReport loocv(const Matrix& x, std::span<const int> y, const ModelConfig& cfg);

/// Feature matrix with named columns and class labels for one target.
struct ModelData {
  std::vector<std::string> participant_ids;
  std::vector<std::string> columns;
  Matrix x;
  std::vector<int> y;

  ModelData subset_columns(std::span<const std::size_t> cols) const;
  ModelData without_row(std::size_t r) const;
};

/// FA label, or SC class 1..4.
int target_label(const SubjectRecord& s, Target target);

/// Joins actimetric features (may be null) and subjective columns per
/// subject, in subject order.
ModelData build_model_data(const FeatureTable* actimetric, std::span<const SubjectRecord> subjects,
                           Target target, bool include_subjective = true);

FeatureGroup column_group(std::string_view column);
bool group_matches(FeatureGroup filter, std::string_view column);
/// Column indices admitted by the filter, sorted by column name.
std::vector<std::size_t> candidate_columns(const ModelData& data, FeatureGroup filter);

struct SelectionStep {
  std::string feature;
  double mcc = 0.0;
};

struct SelectionResult {
  std::vector<std::string> chosen_features;
  std::vector<SelectionStep> trajectory;
  EvalReport final_report;
};

/// Greedy forward selection on pooled LOOCV MCC. The best single feature is
/// always taken; later additions must strictly improve MCC.
SelectionResult forward_select(const ModelData& data, FeatureGroup filter, const ModelConfig& cfg);

/// Best subset of size <= max_size by exhaustive enumeration, for checking
/// greedy results on small candidate pools.
SelectionResult exhaustive_select(const ModelData& data, FeatureGroup filter,
                                  const ModelConfig& cfg, int max_size = 3);

struct NestedSelection {
  EvalReport report;
  std::vector<std::vector<std::string>> fold_features;
};

/// Runs forward selection inside each leave-one-out fold and scores only
/// the held-out predictions.
NestedSelection nested_forward_select(const ModelData& data, FeatureGroup filter,
                                      const ModelConfig& cfg);

struct KSweep {
  int best_k = 0;
  std::vector<std::pair<int, double>> mcc_by_k;
};

/// Pooled LOOCV MCC for each k in the grid; ties go to the smaller k.
KSweep sweep_k(const Matrix& x, std::span<const int> y, const ModelConfig& cfg);

}  // namespace actimetry
