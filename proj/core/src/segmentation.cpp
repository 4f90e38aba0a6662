#include "actimetry/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "actimetry/csv.hpp"
#include "actimetry/error.hpp"

namespace actimetry {

const char* to_string(SegmentKind kind) {
  return kind == SegmentKind::Activity ? "A" : "R";
}

SegmentKind segment_kind_from_string(std::string_view text) {
  if (text == "A" || text == "activity" || text == "Activity") return SegmentKind::Activity;
  if (text == "R" || text == "rest" || text == "Rest") return SegmentKind::Rest;
  throw FormatError("unknown segment kind '" + std::string(text) + "'");
}

void SegmentationConfig::validate() const {
  if (smoothing_window < 1 || max_inactivity < 1 || min_rest < 1 || min_activity < 1) {
    throw ConfigError("segmentation durations must be positive");
  }
  if (!(threshold_factor > 0.0 && threshold_factor <= 1.0)) {
    throw ConfigError("threshold_factor must lie in (0, 1]");
  }
  if (!(cpd_penalty >= 0.0)) throw ConfigError("cpd_penalty must be non-negative");
}

std::size_t Segmentation::count(SegmentKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(segments.begin(), segments.end(), [kind](const Segment& s) { return s.kind == kind; }));
}

CleanedSeries clean_series(const ActigramSeries& series, const SegmentationConfig& cfg) {
  CleanedSeries spliced;
  spliced.values.reserve(series.epochs.size());
  spliced.minute_index.reserve(series.epochs.size());
  for (const auto& e : series.epochs) {
    spliced.values.push_back(e.count);
    spliced.minute_index.push_back(e.minute_index);
  }

  CleanedSeries out;
  const std::size_t n = spliced.values.size();
  std::size_t i = 0;
  while (i < n) {
    if (spliced.values[i] != 0.0) {
      out.values.push_back(spliced.values[i]);
      out.minute_index.push_back(spliced.minute_index[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && spliced.values[j] == 0.0) ++j;
    if (static_cast<std::int64_t>(j - i) <= cfg.max_inactivity) {
      out.values.insert(out.values.end(), spliced.values.begin() + i, spliced.values.begin() + j);
      out.minute_index.insert(out.minute_index.end(), spliced.minute_index.begin() + i,
                              spliced.minute_index.begin() + j);
    }
    i = j;
  }
  if (out.values.empty()) {
    throw EmptyDataError("participant '" + series.participant_id + "': empty after cleaning");
  }
  return out;
}

std::vector<double> moving_average(std::span<const double> values, std::int64_t window) {
  if (window < 1) throw ConfigError("moving average window must be >= 1");
  const std::size_t n = values.size();
  std::vector<long double> prefix(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + values[i];

  const auto left = static_cast<std::size_t>(window / 2);
  const auto right = static_cast<std::size_t>(window - 1) - left;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= left ? i - left : 0;
    const std::size_t hi = std::min(n, i + right + 1);
    out[i] = static_cast<double>((prefix[hi] - prefix[lo]) / static_cast<long double>(hi - lo));
  }
  return out;
}

double rbf_gamma(std::span<const double> signal, const SegmentationConfig& cfg) {
  if (cfg.rbf_bandwidth > 0.0) return 1.0 / (cfg.rbf_bandwidth * cfg.rbf_bandwidth);
  constexpr std::size_t kMaxPoints = 1000;
  const std::size_t n = signal.size();
  const std::size_t stride = std::max<std::size_t>(1, (n + kMaxPoints - 1) / kMaxPoints);
  std::vector<double> pts;
  for (std::size_t i = 0; i < n; i += stride) pts.push_back(signal[i]);
  std::vector<double> sq;
  sq.reserve(pts.size() * (pts.size() - 1) / 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = pts[i] - pts[j];
      sq.push_back(d * d);
    }
  }
  if (sq.empty()) return 1.0;
  const auto mid = sq.begin() + static_cast<std::ptrdiff_t>(sq.size() / 2);
  std::nth_element(sq.begin(), mid, sq.end());
  double median = *mid;
  if (median <= 0.0) {
    // Mostly-constant signals: fall back to the mean squared distance.
    median = std::accumulate(sq.begin(), sq.end(), 0.0) / static_cast<double>(sq.size());
  }
  return median > 0.0 ? 1.0 / median : 1.0;
}

namespace {

struct Candidate {
  std::size_t start;
  double within = 0.0;  // sum of kernel values over the block [start, t)
};

std::vector<std::size_t> backtrack(const std::vector<std::size_t>& last, std::size_t n) {
  std::vector<std::size_t> bkps;
  for (std::size_t t = n; t > 0; t = last[t]) bkps.push_back(t);
  std::reverse(bkps.begin(), bkps.end());
  return bkps;
}

std::vector<std::size_t> pelt_linear(std::span<const double> x, double penalty) {
  const std::size_t n = x.size();
  const long double mu =
      std::accumulate(x.begin(), x.end(), 0.0L) / static_cast<long double>(n);
  std::vector<long double> s1(n + 1, 0.0L), s2(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    const long double v = x[i] - mu;
    s1[i + 1] = s1[i] + v;
    s2[i + 1] = s2[i] + v * v;
  }
  auto cost = [&](std::size_t a, std::size_t b) {
    const long double sum = s1[b] - s1[a];
    const long double c = (s2[b] - s2[a]) - sum * sum / static_cast<long double>(b - a);
    return static_cast<double>(std::max<long double>(c, 0.0L));
  };

  std::vector<double> best(n + 1, 0.0);
  std::vector<std::size_t> last(n + 1, 0);
  best[0] = -penalty;
  std::vector<std::size_t> cands{0};
  std::vector<double> scratch;
  for (std::size_t t = 1; t <= n; ++t) {
    scratch.resize(cands.size());
    double f = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < cands.size(); ++k) {
      scratch[k] = best[cands[k]] + cost(cands[k], t);
      if (scratch[k] + penalty < f) {
        f = scratch[k] + penalty;
        arg = cands[k];
      }
    }
    best[t] = f;
    last[t] = arg;
    std::size_t kept = 0;
    for (std::size_t k = 0; k < cands.size(); ++k) {
      if (scratch[k] <= f) cands[kept++] = cands[k];
    }
    cands.resize(kept);
    cands.push_back(t);
  }
  return backtrack(last, n);
}

std::vector<std::size_t> pelt_rbf(std::span<const double> x, double penalty, double gamma) {
  const std::size_t n = x.size();
  std::vector<double> best(n + 1, 0.0);
  std::vector<std::size_t> last(n + 1, 0);
  best[0] = -penalty;
  std::vector<Candidate> cands{{0, 0.0}};
  std::vector<double> suffix;
  std::vector<double> scratch;
  for (std::size_t t = 1; t <= n; ++t) {
    // Extend every candidate block [s, t-1) with the point x[t-1].
    const std::size_t newest = t - 1;
    const std::size_t lo = cands.front().start;
    suffix.assign(newest - lo + 1, 0.0);  // suffix[j - lo] = sum_{i in [j, newest)} k(x_newest, x_i)
    for (std::size_t j = newest; j-- > lo;) {
      const double d = x[newest] - x[j];
      suffix[j - lo] = suffix[j - lo + 1] + std::exp(-gamma * d * d);
    }
    scratch.resize(cands.size());
    double f = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < cands.size(); ++k) {
      auto& c = cands[k];
      c.within += 2.0 * suffix[c.start - lo] + 1.0;
      const double len = static_cast<double>(t - c.start);
      const double cost = std::max(0.0, len - c.within / len);
      scratch[k] = best[c.start] + cost;
      if (scratch[k] + penalty < f) {
        f = scratch[k] + penalty;
        arg = c.start;
      }
    }
    best[t] = f;
    last[t] = arg;
    std::size_t kept = 0;
    for (std::size_t k = 0; k < cands.size(); ++k) {
      if (scratch[k] <= f) cands[kept++] = cands[k];
    }
    cands.resize(kept);
    cands.push_back({t, 0.0});
  }
  return backtrack(last, n);
}

}  // namespace

std::vector<std::size_t> detect_change_points(std::span<const double> signal,
                                              const SegmentationConfig& cfg) {
  if (signal.empty()) throw EmptyDataError("detect_change_points: empty signal");
  if (cfg.cpd_kernel == CpdKernel::Linear) return pelt_linear(signal, cfg.cpd_penalty);
  return pelt_rbf(signal, cfg.cpd_penalty, rbf_gamma(signal, cfg));
}

double activity_threshold(std::span<const double> curve, double threshold_factor) {
  if (curve.empty()) throw EmptyDataError("activity_threshold: empty curve");
  std::vector<double> v(curve.begin(), curve.end());
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  double median = *mid;
  if (n % 2 == 0) median = 0.5 * (median + *std::max_element(v.begin(), mid));
  return threshold_factor * median;
}

std::vector<Segment> classify_segments(std::span<const double> smoothed,
                                       std::span<const std::size_t> breakpoints,
                                       double threshold) {
  std::vector<Segment> out;
  std::size_t start = 0;
  for (const std::size_t end : breakpoints) {
    if (end <= start || end > smoothed.size()) {
      throw ConfigError("classify_segments: breakpoints must be increasing and within the signal");
    }
    long double sum = 0.0L;
    for (std::size_t i = start; i < end; ++i) sum += smoothed[i];
    const double mean = static_cast<double>(sum / static_cast<long double>(end - start));
    out.push_back({mean > threshold ? SegmentKind::Activity : SegmentKind::Rest, start, end});
    start = end;
  }
  if (start != smoothed.size()) throw ConfigError("classify_segments: breakpoints must end at n");
  return out;
}

std::vector<Segment> classify_segments(std::span<const double> smoothed,
                                       std::span<const std::size_t> breakpoints,
                                       const SegmentationConfig& cfg) {
  return classify_segments(smoothed, breakpoints,
                           activity_threshold(smoothed, cfg.threshold_factor));
}

namespace {

std::vector<Segment> coalesce(const std::vector<Segment>& in) {
  std::vector<Segment> out;
  for (const auto& s : in) {
    if (!out.empty() && out.back().kind == s.kind) {
      out.back().end = s.end;
    } else {
      out.push_back(s);
    }
  }
  return out;
}

// In an alternating list every neighbour of a short segment has the other
// kind, so absorbing it is a relabel followed by coalescing.
std::vector<Segment> absorb_short(std::vector<Segment> in, SegmentKind kind, std::int64_t min_len) {
  if (in.size() <= 1) return in;
  for (auto& s : in) {
    if (s.kind == kind && static_cast<std::int64_t>(s.length()) < min_len) {
      s.kind = kind == SegmentKind::Rest ? SegmentKind::Activity : SegmentKind::Rest;
    }
  }
  return in;
}

}  // namespace

std::vector<Segment> merge_segments(std::vector<Segment> provisional,
                                    const SegmentationConfig& cfg) {
  for (std::size_t i = 1; i < provisional.size(); ++i) {
    if (provisional[i].start != provisional[i - 1].end) {
      throw ConfigError("merge_segments: segments must be contiguous");
    }
  }
  std::vector<Segment> cur = std::move(provisional);
  while (true) {
    auto next = coalesce(cur);
    next = coalesce(absorb_short(std::move(next), SegmentKind::Rest, cfg.min_rest));
    next = coalesce(absorb_short(std::move(next), SegmentKind::Activity, cfg.min_activity));
    if (next == cur) return next;
    cur = std::move(next);
  }
}

Segmentation segment_pipeline(const ActigramSeries& series, const SegmentationConfig& cfg) {
  cfg.validate();
  Segmentation seg;
  seg.participant_id = series.participant_id;
  seg.cleaned = clean_series(series, cfg);
  seg.cleaned_length = seg.cleaned.values.size();
  seg.smoothed = moving_average(seg.cleaned.values, cfg.smoothing_window);
  const auto bkps = detect_change_points(seg.smoothed, cfg);
  const std::span<const double> median_source =
      cfg.threshold_source == ThresholdSource::Smoothed ? std::span<const double>(seg.smoothed)
                                                        : std::span<const double>(seg.cleaned.values);
  seg.threshold = activity_threshold(median_source, cfg.threshold_factor);
  seg.segments = merge_segments(classify_segments(seg.smoothed, bkps, seg.threshold), cfg);
  return seg;
}

std::vector<SegmentRow> segment_rows(const Segmentation& seg) {
  std::vector<SegmentRow> rows;
  for (const auto& s : seg.segments) {
    rows.push_back({seg.participant_id, s.kind, seg.cleaned.minute_index[s.start],
                    seg.cleaned.minute_index[s.end - 1] + 1});
  }
  return rows;
}

void write_segments_csv(std::ostream& out, std::span<const Segmentation> segmentations) {
  out << "participant_id,kind,start_minute,end_minute\n";
  for (const auto& seg : segmentations) {
    for (const auto& r : segment_rows(seg)) {
      out << csv::escape(r.participant_id) << ',' << to_string(r.kind) << ',' << r.start_minute
          << ',' << r.end_minute << '\n';
    }
  }
}

}  // namespace actimetry
