#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace actimetry {

/// Counts indexed [actual][predicted] over an ordered label set.
struct ConfusionMatrix {
  std::vector<int> labels;
  std::vector<std::vector<long long>> counts;

  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<int> labels);
  ConfusionMatrix(std::vector<int> labels, std::vector<std::vector<long long>> counts);

  /// Builds from paired label sequences; labels are the sorted union.
  static ConfusionMatrix from_predictions(std::span<const int> actual,
                                          std::span<const int> predicted);

  void add(int actual, int predicted);
  std::size_t index_of(int label) const;
  long long total() const;
  long long trace() const;
  std::size_t size() const { return labels.size(); }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Binary MCC with label order {negative, positive}; 0 when any marginal is empty.
double mcc_binary(const ConfusionMatrix& cm);
double mcc_binary(long long tp, long long tn, long long fp, long long fn);

/// Gorodkin's R_K; reduces to the binary MCC for K = 2.
double mcc_multiclass(const ConfusionMatrix& cm);

/// Dispatches to the binary or multiclass form.
double mcc(const ConfusionMatrix& cm);

struct ClassMetrics {
  int label = 0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

struct ConfusionMetrics {
  double accuracy = 0.0;
  std::vector<ClassMetrics> per_class;  // one-vs-rest, in label order
};

/// Accuracy and one-vs-rest sensitivity, specificity, precision and F1;
/// any 0/0 ratio is reported as 0.
ConfusionMetrics confusion_metrics(const ConfusionMatrix& cm);

struct EvalReport {
  ConfusionMatrix confusion;
  double mcc = 0.0;
  double accuracy = 0.0;
  std::vector<ClassMetrics> per_class;
  bool pooled = true;
  /// Set when the evaluated labels hold a single class.
  bool degenerate = false;
};

EvalReport make_report(const ConfusionMatrix& cm, bool pooled = true);

}  // namespace actimetry
