#include "actimetry/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "actimetry/error.hpp"
#include "actimetry/missing.hpp"

namespace actimetry {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) throw ConfigError("ragged matrix rows");
    std::copy(rows[r].begin(), rows[r].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(r * m.cols_));
  }
  return m;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
  Matrix out(rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = (*this)(r, cols[c]);
  }
  return out;
}

Matrix Matrix::without_row(std::size_t skip) const {
  Matrix out(rows_ - 1, cols_);
  std::size_t o = 0;
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r == skip) continue;
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_), cols_,
                out.data_.begin() + static_cast<std::ptrdiff_t>(o * cols_));
    ++o;
  }
  return out;
}

const char* to_string(LeakageMode m) { return m == LeakageMode::FoldSafe ? "fold_safe" : "global"; }
const char* to_string(Target t) { return t == Target::FA ? "fa" : "sc"; }
const char* to_string(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::Activity: return "activity";
    case FeatureGroup::Rest: return "rest";
    case FeatureGroup::Both: return "both";
    case FeatureGroup::Subjective: return "subjective";
    case FeatureGroup::All: return "all";
  }
  return "?";
}

LeakageMode leakage_mode_from_string(std::string_view s) {
  if (s == "fold_safe") return LeakageMode::FoldSafe;
  if (s == "global") return LeakageMode::Global;
  throw ConfigError("unknown leakage mode '" + std::string(s) + "'");
}

Target target_from_string(std::string_view s) {
  if (s == "fa" || s == "FA") return Target::FA;
  if (s == "sc" || s == "SC") return Target::SC;
  throw ConfigError("unknown target '" + std::string(s) + "'");
}

FeatureGroup feature_group_from_string(std::string_view s) {
  for (auto g : {FeatureGroup::Activity, FeatureGroup::Rest, FeatureGroup::Both,
                 FeatureGroup::Subjective, FeatureGroup::All}) {
    if (s == to_string(g)) return g;
  }
  throw ConfigError("unknown feature group '" + std::string(s) + "'");
}

void ModelConfig::validate() const {
  if (k_neighbors < 1) throw ConfigError("k_neighbors must be positive");
  if (k_grid.empty()) throw ConfigError("k_grid must not be empty");
  for (int k : k_grid) {
    if (k < 1) throw ConfigError("k_grid entries must be positive");
  }
  if (selection_max_size < 1) throw ConfigError("selection_max_size must be >= 1");
}

ImputerParams fit_imputer(const Matrix& train) {
  ImputerParams p;
  for (std::size_t c = 0; c < train.cols(); ++c) {
    long double sum = 0.0L;
    std::size_t n = 0;
    for (std::size_t r = 0; r < train.rows(); ++r) {
      const double v = train(r, c);
      if (!is_missing(v)) {
        sum += v;
        ++n;
      }
    }
    if (n == 0) {
      p.dropped.push_back(c);
    } else {
      p.kept.push_back(c);
      p.means.push_back(static_cast<double>(sum / static_cast<long double>(n)));
    }
  }
  return p;
}

Matrix apply_imputer(const ImputerParams& params, const Matrix& m) {
  Matrix out(m.rows(), params.kept.size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < params.kept.size(); ++c) {
      const double v = m(r, params.kept[c]);
      out(r, c) = is_missing(v) ? params.means[c] : v;
    }
  }
  return out;
}

Imputed impute_mean(const Matrix& train, const Matrix& apply) {
  Imputed out;
  out.params = fit_imputer(train);
  out.train = apply_imputer(out.params, train);
  out.apply = apply_imputer(out.params, apply);
  return out;
}

ScalerParams fit_scaler(const Matrix& train) {
  ScalerParams p;
  p.min.assign(train.cols(), 0.0);
  p.max.assign(train.cols(), 0.0);
  for (std::size_t c = 0; c < train.cols(); ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t r = 0; r < train.rows(); ++r) {
      lo = std::min(lo, train(r, c));
      hi = std::max(hi, train(r, c));
    }
    if (train.rows() == 0) lo = hi = 0.0;
    p.min[c] = lo;
    p.max[c] = hi;
  }
  return p;
}

Matrix apply_scaler(const ScalerParams& params, const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const double range = params.max[c] - params.min[c];
    for (std::size_t r = 0; r < m.rows(); ++r) {
      out(r, c) = range > 0.0 ? (m(r, c) - params.min[c]) / range : 0.0;
    }
  }
  return out;
}

Scaled minmax_scale(const Matrix& train, const Matrix& apply) {
  Scaled out;
  out.params = fit_scaler(train);
  out.train = apply_scaler(out.params, train);
  out.apply = apply_scaler(out.params, apply);
  return out;
}

Preprocessor Preprocessor::fit(const Matrix& train) {
  Preprocessor p;
  p.imputer = fit_imputer(train);
  p.scaler = fit_scaler(apply_imputer(p.imputer, train));
  return p;
}

Matrix Preprocessor::transform(const Matrix& m) const {
  return apply_scaler(scaler, apply_imputer(imputer, m));
}

int knn_predict(const Matrix& train, std::span<const int> labels, std::span<const double> query,
                int k) {
  if (train.rows() == 0) throw EmptyDataError("knn_predict: empty training set");
  if (labels.size() != train.rows()) throw ConfigError("knn_predict: label count mismatch");
  if (query.size() != train.cols()) throw ConfigError("knn_predict: query dimension mismatch");
  if (k < 1 || static_cast<std::size_t>(k) > train.rows()) {
    throw ConfigError("knn_predict: k=" + std::to_string(k) + " exceeds training size " +
                      std::to_string(train.rows()));
  }
  std::vector<std::pair<double, std::size_t>> dist(train.rows());
  for (std::size_t r = 0; r < train.rows(); ++r) {
    const auto row = train.row(r);
    double d = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double diff = row[c] - query[c];
      d += diff * diff;
    }
    dist[r] = {d, r};
  }
  const auto kk = static_cast<std::size_t>(k);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
  std::map<int, int> votes;
  for (std::size_t i = 0; i < kk; ++i) ++votes[labels[dist[i].second]];
  int best_label = votes.begin()->first;
  int best_votes = -1;
  for (const auto& [label, v] : votes) {
    if (v > best_votes) {
      best_votes = v;
      best_label = label;
    }
  }
  return best_label;
}

std::vector<int> loocv_predictions(const Matrix& x, std::span<const int> y, const ModelConfig& cfg) {
  if (x.rows() < 2) throw InsufficientDataError("loocv needs at least two samples");
  if (y.size() != x.rows()) throw ConfigError("loocv: label count mismatch");
  std::vector<int> pred(x.rows());
  std::vector<int> train_labels(x.rows() - 1);
  if (cfg.leakage == LeakageMode::Global) {
    const Matrix all = Preprocessor::fit(x).transform(x);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      std::size_t o = 0;
      for (std::size_t r = 0; r < y.size(); ++r) {
        if (r != i) train_labels[o++] = y[r];
      }
      pred[i] = knn_predict(all.without_row(i), train_labels, all.row(i), cfg.k_neighbors);
    }
    return pred;
  }
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const Matrix train_raw = x.without_row(i);
    std::size_t o = 0;
    for (std::size_t r = 0; r < y.size(); ++r) {
      if (r != i) train_labels[o++] = y[r];
    }
    const auto prep = Preprocessor::fit(train_raw);
    Matrix query(1, x.cols());
    for (std::size_t c = 0; c < x.cols(); ++c) query(0, c) = x(i, c);
    const Matrix q = prep.transform(query);
    pred[i] = knn_predict(prep.transform(train_raw), train_labels, q.row(0), cfg.k_neighbors);
  }
  return pred;
}

EvalReport loocv(const Matrix& x, std::span<const int> y, const ModelConfig& cfg) {
  std::vector<int> labels(y.begin(), y.end());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  ConfusionMatrix cm(labels);
  if (labels.size() < 2) {
    for (int v : y) cm.add(v, v);
    auto r = make_report(cm);
    r.degenerate = true;
    r.mcc = 0.0;
    return r;
  }
  const auto pred = loocv_predictions(x, y, cfg);
  for (std::size_t i = 0; i < y.size(); ++i) cm.add(y[i], pred[i]);
  return make_report(cm);
}

ModelData ModelData::subset_columns(std::span<const std::size_t> cols) const {
  ModelData out;
  out.participant_ids = participant_ids;
  for (auto c : cols) out.columns.push_back(columns[c]);
  out.x = x.select_columns(cols);
  out.y = y;
  return out;
}

ModelData ModelData::without_row(std::size_t r) const {
  ModelData out;
  out.columns = columns;
  out.x = x.without_row(r);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (i == r) continue;
    out.participant_ids.push_back(participant_ids[i]);
    out.y.push_back(y[i]);
  }
  return out;
}

int target_label(const SubjectRecord& s, Target target) {
  return target == Target::FA ? s.fa : s.sc_class();
}

ModelData build_model_data(const FeatureTable* actimetric, std::span<const SubjectRecord> subjects,
                           Target target, bool include_subjective) {
  ModelData d;
  if (actimetric) d.columns = actimetric->columns;
  if (include_subjective) {
    for (const auto& c : subjective_feature_names()) d.columns.push_back(c);
  }
  std::vector<std::vector<double>> rows;
  for (const auto& s : subjects) {
    std::vector<double> row;
    row.reserve(d.columns.size());
    if (actimetric) {
      const auto& src = actimetric->rows[actimetric->row_index(s.participant_id)];
      row.insert(row.end(), src.begin(), src.end());
    }
    if (include_subjective) {
      for (const auto& c : subjective_feature_names()) row.push_back(subject_value(s, c).value_or(kMissing));
    }
    rows.push_back(std::move(row));
    d.participant_ids.push_back(s.participant_id);
    d.y.push_back(target_label(s, target));
  }
  d.x = Matrix::from_rows(rows);
  if (rows.empty()) d.x = Matrix(0, d.columns.size());
  return d;
}

FeatureGroup column_group(std::string_view column) {
  if (column.starts_with("activity.")) return FeatureGroup::Activity;
  if (column.starts_with("rest.")) return FeatureGroup::Rest;
  return FeatureGroup::Subjective;
}

bool group_matches(FeatureGroup filter, std::string_view column) {
  const auto g = column_group(column);
  switch (filter) {
    case FeatureGroup::All: return true;
    case FeatureGroup::Both: return g == FeatureGroup::Activity || g == FeatureGroup::Rest;
    default: return g == filter;
  }
}

std::vector<std::size_t> candidate_columns(const ModelData& data, FeatureGroup filter) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < data.columns.size(); ++c) {
    if (group_matches(filter, data.columns[c])) out.push_back(c);
  }
  std::sort(out.begin(), out.end(),
            [&](auto a, auto b) { return data.columns[a] < data.columns[b]; });
  return out;
}

namespace {

double subset_mcc(const ModelData& data, std::span<const std::size_t> cols, const ModelConfig& cfg) {
  return loocv(data.x.select_columns(cols), data.y, cfg).mcc;
}

}  // namespace

SelectionResult forward_select(const ModelData& data, FeatureGroup filter, const ModelConfig& cfg) {
  cfg.validate();
  auto pool = candidate_columns(data, filter);
  if (pool.empty()) throw ConfigError(std::string("no candidate features in group ") + to_string(filter));

  SelectionResult result;
  std::vector<std::size_t> chosen;
  double current = -std::numeric_limits<double>::infinity();
  while (static_cast<int>(chosen.size()) < cfg.selection_max_size && !pool.empty()) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_pos = 0;
    std::vector<std::size_t> trial = chosen;
    trial.push_back(0);
    for (std::size_t p = 0; p < pool.size(); ++p) {
      trial.back() = pool[p];
      const double m = subset_mcc(data, trial, cfg);
      if (m > best) {
        best = m;
        best_pos = p;
      }
    }
    if (!chosen.empty() && !(best > current)) break;
    chosen.push_back(pool[best_pos]);
    result.trajectory.push_back({data.columns[pool[best_pos]], best});
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best_pos));
    current = best;
  }
  for (auto c : chosen) result.chosen_features.push_back(data.columns[c]);
  result.final_report = loocv(data.x.select_columns(chosen), data.y, cfg);
  return result;
}

SelectionResult exhaustive_select(const ModelData& data, FeatureGroup filter,
                                  const ModelConfig& cfg, int max_size) {
  cfg.validate();
  const auto pool = candidate_columns(data, filter);
  if (pool.empty()) throw ConfigError(std::string("no candidate features in group ") + to_string(filter));
  std::vector<std::size_t> best_set;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> current;
  // Enumerates subsets in lexicographic order of the sorted pool, so the
  // first subset reaching the maximum wins ties.
  std::function<void(std::size_t)> recurse = [&](std::size_t from) {
    if (!current.empty()) {
      const double m = subset_mcc(data, current, cfg);
      if (m > best) {
        best = m;
        best_set = current;
      }
    }
    if (static_cast<int>(current.size()) == max_size) return;
    for (std::size_t p = from; p < pool.size(); ++p) {
      current.push_back(pool[p]);
      recurse(p + 1);
      current.pop_back();
    }
  };
  recurse(0);
  SelectionResult result;
  for (auto c : best_set) result.chosen_features.push_back(data.columns[c]);
  result.trajectory.push_back({result.chosen_features.empty() ? "" : result.chosen_features.back(), best});
  result.final_report = loocv(data.x.select_columns(best_set), data.y, cfg);
  return result;
}

NestedSelection nested_forward_select(const ModelData& data, FeatureGroup filter,
                                      const ModelConfig& cfg) {
  std::vector<int> labels(data.y.begin(), data.y.end());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  ConfusionMatrix cm(labels);
  NestedSelection out;
  for (std::size_t i = 0; i < data.y.size(); ++i) {
    const ModelData train = data.without_row(i);
    const auto sel = forward_select(train, filter, cfg);
    std::vector<std::size_t> cols;
    for (const auto& name : sel.chosen_features) {
      cols.push_back(static_cast<std::size_t>(
          std::find(data.columns.begin(), data.columns.end(), name) - data.columns.begin()));
    }
    const Matrix train_x = train.x.select_columns(cols);
    const auto prep = Preprocessor::fit(train_x);
    Matrix query(1, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) query(0, c) = data.x(i, cols[c]);
    const int pred = knn_predict(prep.transform(train_x), train.y, prep.transform(query).row(0),
                                 cfg.k_neighbors);
    cm.add(data.y[i], pred);
    out.fold_features.push_back(sel.chosen_features);
  }
  out.report = make_report(cm);
  return out;
}

KSweep sweep_k(const Matrix& x, std::span<const int> y, const ModelConfig& cfg) {
  cfg.validate();
  KSweep sweep;
  double best = -std::numeric_limits<double>::infinity();
  auto grid = cfg.k_grid;
  std::sort(grid.begin(), grid.end());
  for (int k : grid) {
    ModelConfig c = cfg;
    c.k_neighbors = k;
    const double m = loocv(x, y, c).mcc;
    sweep.mcc_by_k.emplace_back(k, m);
    if (m > best) {
      best = m;
      sweep.best_k = k;
    }
  }
  return sweep;
}

}  // namespace actimetry
