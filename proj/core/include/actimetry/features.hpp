#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "actimetry/segmentation.hpp"

namespace actimetry {

enum class Method {
  Mean, Max, Min, Range, Std, Variance, Cv, P1, P5, P25, P50, P75, P95, P99,
  FuzzyEn, DistEn, SvdEn, PermEn, PhaseEn,
};

const char* to_string(Method m);
bool is_entropy(Method m);

enum class Aggregation { Mean, Std };
const char* to_string(Aggregation a);

/// Parameters of one entropy evaluation; each method reads only its own
/// fields (fuzzy: m, r, n, tau; dist: m, bins; svd/perm: m, tau;
/// phase: sectors, tau).
struct EntropyParams {
  int m = 2;
  int tau = 1;
  double r = 0.2;
  double n = 2.0;
  int bins = 64;
  int sectors = 8;

  friend bool operator==(const EntropyParams&, const EntropyParams&) = default;
};

inline constexpr std::size_t kParamSetsPerEntropy = 10;
inline constexpr std::size_t kBaseFeatureCount = 14 + 5 * kParamSetsPerEntropy;  // 64
inline constexpr std::size_t kActimetricFeatureCount = kBaseFeatureCount * 2 * 2;  // 256

/// The ten parameter sets used for each entropy method.
struct FeatureGrid {
  std::vector<EntropyParams> fuzzy;
  std::vector<EntropyParams> dist;
  std::vector<EntropyParams> svd;
  std::vector<EntropyParams> perm;
  std::vector<EntropyParams> phase;

  static FeatureGrid defaults();
  /// Throws ConfigError unless every method has exactly ten valid sets
  /// with distinct tags.
  void validate() const;
};

/// One per-segment measurement: a statistic or an entropy with parameters.
struct BaseFeature {
  Method method;
  EntropyParams params;

  /// e.g. "p99", "fuzzy_en.m2_r0.2", "perm_en.m3_tau1".
  std::string tag() const;
  double evaluate(std::span<const double> segment) const;
};

/// The 64 base features in evaluation order: 14 statistics, then fuzzy,
/// dist, svd, perm, and phase entropy sets.
std::vector<BaseFeature> base_features(const FeatureGrid& grid);

struct FeatureSpec {
  BaseFeature base;
  Aggregation aggregation;
  SegmentKind group;

  /// `<group>.<agg>.<method>[.<paramtag>]`, e.g. "activity.std.max".
  std::string name() const;
};

/// All 256 specs ordered by canonical name.
std::vector<FeatureSpec> feature_specs(const FeatureGrid& grid);
std::vector<std::string> feature_names(const FeatureGrid& grid);

/// Evaluates all base features on one segment. Shares distance passes
/// between parameter sets of the same embedding.
std::vector<double> evaluate_base_features(std::span<const double> segment,
                                           const FeatureGrid& grid);

struct SegmentSeries {
  std::vector<double> values;  // one entry per segment of the group, in time order
  std::size_t dropped = 0;     // segments whose value was missing
};

SegmentSeries per_segment_series(const Segmentation& seg, SegmentKind group,
                                 const BaseFeature& feature);

struct Aggregate {
  double mean;
  double std;
};

/// Mean and sample std; a single value has std 0, an empty series is missing.
Aggregate aggregate(std::span<const double> ts);

struct FeatureVector {
  std::string participant_id;
  std::vector<std::string> names;
  std::vector<double> values;

  /// Value by canonical name; throws ConfigError when absent.
  double at(std::string_view name) const;
};

FeatureVector extract_all(const Segmentation& seg, const FeatureGrid& grid);

/// Rows of participants by named feature columns; NaN marks missing cells.
struct FeatureTable {
  std::vector<std::string> participant_ids;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column_index(std::string_view name) const;
  std::size_t row_index(std::string_view participant_id) const;
};

FeatureTable make_feature_table(std::span<const FeatureVector> vectors);

/// `participant_id` followed by feature columns; missing = empty cell.
void write_feature_csv(std::ostream& out, const FeatureTable& table);
FeatureTable read_feature_csv(std::istream& in, const std::string& source);
FeatureTable read_feature_csv(const std::filesystem::path& path);

}  // namespace actimetry
