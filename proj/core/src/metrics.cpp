#include "actimetry/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "actimetry/error.hpp"

namespace actimetry {

ConfusionMatrix::ConfusionMatrix(std::vector<int> labels_in)
    : labels(std::move(labels_in)),
      counts(labels.size(), std::vector<long long>(labels.size(), 0)) {}

ConfusionMatrix::ConfusionMatrix(std::vector<int> labels_in,
                                 std::vector<std::vector<long long>> counts_in)
    : labels(std::move(labels_in)), counts(std::move(counts_in)) {
  if (counts.size() != labels.size()) throw ConfigError("confusion matrix: row count mismatch");
  for (const auto& row : counts) {
    if (row.size() != labels.size()) throw ConfigError("confusion matrix must be square");
    for (auto c : row) {
      if (c < 0) throw ConfigError("confusion matrix counts must be non-negative");
    }
  }
}

ConfusionMatrix ConfusionMatrix::from_predictions(std::span<const int> actual,
                                                  std::span<const int> predicted) {
  if (actual.size() != predicted.size()) throw ConfigError("prediction length mismatch");
  std::set<int> labels(actual.begin(), actual.end());
  labels.insert(predicted.begin(), predicted.end());
  ConfusionMatrix cm(std::vector<int>(labels.begin(), labels.end()));
  for (std::size_t i = 0; i < actual.size(); ++i) cm.add(actual[i], predicted[i]);
  return cm;
}

std::size_t ConfusionMatrix::index_of(int label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw ConfigError("label " + std::to_string(label) + " not in matrix");
  return static_cast<std::size_t>(it - labels.begin());
}

void ConfusionMatrix::add(int actual, int predicted) {
  ++counts[index_of(actual)][index_of(predicted)];
}

long long ConfusionMatrix::total() const {
  long long s = 0;
  for (const auto& row : counts) {
    for (auto c : row) s += c;
  }
  return s;
}

long long ConfusionMatrix::trace() const {
  long long s = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) s += counts[i][i];
  return s;
}

double mcc_binary(long long tp, long long tn, long long fp, long long fn) {
  const double denom = static_cast<double>(tp + fp) * static_cast<double>(tp + fn) *
                       static_cast<double>(tn + fp) * static_cast<double>(tn + fn);
  if (denom == 0.0) return 0.0;
  const double num = static_cast<double>(tp) * static_cast<double>(tn) -
                     static_cast<double>(fp) * static_cast<double>(fn);
  return num / std::sqrt(denom);
}

double mcc_binary(const ConfusionMatrix& cm) {
  if (cm.size() != 2) throw ConfigError("mcc_binary needs a 2x2 matrix");
  return mcc_binary(cm.counts[1][1], cm.counts[0][0], cm.counts[0][1], cm.counts[1][0]);
}

double mcc_multiclass(const ConfusionMatrix& cm) {
  const std::size_t k = cm.size();
  std::vector<double> actual(k, 0.0), predicted(k, 0.0);
  double correct = 0.0, total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto c = static_cast<double>(cm.counts[i][j]);
      actual[i] += c;
      predicted[j] += c;
      total += c;
      if (i == j) correct += c;
    }
  }
  double pt = 0.0, pp = 0.0, tt = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    pt += predicted[i] * actual[i];
    pp += predicted[i] * predicted[i];
    tt += actual[i] * actual[i];
  }
  const double denom = (total * total - pp) * (total * total - tt);
  if (denom <= 0.0) return 0.0;
  return (correct * total - pt) / std::sqrt(denom);
}

double mcc(const ConfusionMatrix& cm) {
  return cm.size() == 2 ? mcc_binary(cm) : mcc_multiclass(cm);
}

ConfusionMetrics confusion_metrics(const ConfusionMatrix& cm) {
  const auto ratio = [](double a, double b) { return b == 0.0 ? 0.0 : a / b; };
  ConfusionMetrics m;
  const auto total = static_cast<double>(cm.total());
  m.accuracy = ratio(static_cast<double>(cm.trace()), total);
  for (std::size_t c = 0; c < cm.size(); ++c) {
    double tp = static_cast<double>(cm.counts[c][c]);
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < cm.size(); ++j) {
      row += static_cast<double>(cm.counts[c][j]);
      col += static_cast<double>(cm.counts[j][c]);
    }
    const double fn = row - tp;
    const double fp = col - tp;
    const double tn = total - tp - fn - fp;
    ClassMetrics k;
    k.label = cm.labels[c];
    k.sensitivity = ratio(tp, tp + fn);
    k.specificity = ratio(tn, tn + fp);
    k.precision = ratio(tp, tp + fp);
    k.f1 = ratio(2.0 * k.precision * k.sensitivity, k.precision + k.sensitivity);
    m.per_class.push_back(k);
  }
  return m;
}

EvalReport make_report(const ConfusionMatrix& cm, bool pooled) {
  EvalReport r;
  r.confusion = cm;
  r.mcc = mcc(cm);
  const auto m = confusion_metrics(cm);
  r.accuracy = m.accuracy;
  r.per_class = m.per_class;
  r.pooled = pooled;
  int present = 0;
  for (const auto& row : cm.counts) {
    long long s = 0;
    for (auto c : row) s += c;
    if (s > 0) ++present;
  }
  r.degenerate = present < 2;
  if (r.degenerate) r.mcc = 0.0;
  return r;
}

}  // namespace actimetry
