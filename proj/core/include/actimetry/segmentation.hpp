#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "actimetry/ingest.hpp"

namespace actimetry {

enum class SegmentKind { Activity, Rest };

const char* to_string(SegmentKind kind);
SegmentKind segment_kind_from_string(std::string_view text);

enum class CpdKernel { Rbf, Linear };

/// Which curve the activity threshold's median is taken from.
enum class ThresholdSource { Smoothed, Raw };

struct SegmentationConfig {
  std::int64_t smoothing_window = 60;   // minutes
  std::int64_t max_inactivity = 720;    // zero runs longer than this are cut
  double threshold_factor = 0.75;       // fraction of the median
  std::int64_t min_rest = 180;          // minutes
  std::int64_t min_activity = 240;      // minutes
  CpdKernel cpd_kernel = CpdKernel::Rbf;
  double cpd_penalty = 30.0;
  /// RBF bandwidth h in k(x, y) = exp(-(x - y)^2 / h^2); <= 0 selects the
  /// median heuristic (h^2 = median pairwise squared distance).
  double rbf_bandwidth = 0.0;
  ThresholdSource threshold_source = ThresholdSource::Smoothed;

  void validate() const;
};

/// Half-open span [start, end) of cleaned-series indices.
struct Segment {
  SegmentKind kind = SegmentKind::Rest;
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Series after gap splicing and long-inactivity removal.
struct CleanedSeries {
  std::vector<double> values;
  /// Original minute index of every retained value.
  std::vector<std::int64_t> minute_index;
};

struct Segmentation {
  std::string participant_id;
  std::vector<Segment> segments;
  std::size_t cleaned_length = 0;
  CleanedSeries cleaned;
  std::vector<double> smoothed;
  double threshold = 0.0;

  std::span<const double> values(const Segment& s) const {
    return std::span<const double>(cleaned.values).subspan(s.start, s.length());
  }
  std::size_t count(SegmentKind kind) const;
};

CleanedSeries clean_series(const ActigramSeries& series, const SegmentationConfig& cfg);

/// Centered moving mean; the window is truncated at the sequence edges.
/// For even windows the extra sample sits on the left.
std::vector<double> moving_average(std::span<const double> values, std::int64_t window);

/// Penalized kernel change-point detection, solved exactly with pruned
/// optimal partitioning. Returns segment end indices: 0 excluded, n included.
std::vector<std::size_t> detect_change_points(std::span<const double> signal,
                                              const SegmentationConfig& cfg);

/// Inverse squared bandwidth used by the RBF kernel for this signal.
double rbf_gamma(std::span<const double> signal, const SegmentationConfig& cfg);

/// Median of the curve scaled by the threshold factor.
double activity_threshold(std::span<const double> curve, double threshold_factor);

/// Labels each span between breakpoints: Activity iff its mean smoothed value
/// exceeds `threshold`.
std::vector<Segment> classify_segments(std::span<const double> smoothed,
                                       std::span<const std::size_t> breakpoints,
                                       double threshold);
std::vector<Segment> classify_segments(std::span<const double> smoothed,
                                       std::span<const std::size_t> breakpoints,
                                       const SegmentationConfig& cfg);

/// Coalesces same-kind neighbours and absorbs short rests, then short
/// activities, until nothing changes. The result strictly alternates.
std::vector<Segment> merge_segments(std::vector<Segment> provisional,
                                    const SegmentationConfig& cfg);

Segmentation segment_pipeline(const ActigramSeries& series, const SegmentationConfig& cfg);

/// `participant_id,kind,start_minute,end_minute`; minutes refer to the
/// original timeline, end exclusive.
void write_segments_csv(std::ostream& out, std::span<const Segmentation> segmentations);

struct SegmentRow {
  std::string participant_id;
  SegmentKind kind;
  std::int64_t start_minute;
  std::int64_t end_minute;
};
std::vector<SegmentRow> segment_rows(const Segmentation& seg);

}  // namespace actimetry
