#include "actimetry/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "actimetry/csv.hpp"
#include "actimetry/error.hpp"
#include "actimetry/rng.hpp"

namespace actimetry {

void SynthConfig::validate() const {
  if (n_subjects < 2) throw ConfigError("synth: n_subjects must be >= 2");
  if (fa_positive < 0 || fa_positive > n_subjects) throw ConfigError("synth: fa_positive out of range");
  if (days < 1 || days > 14) throw ConfigError("synth: days must lie in 1..14");
  if (!(active_hours > 0.0 && active_hours < 24.0)) throw ConfigError("synth: active_hours in (0, 24)");
  if (mesor < 0.0 || day_amplitude < 0.0 || noise_sd < 0.0 || amplitude_variability < 0.0) {
    throw ConfigError("synth: levels must be non-negative");
  }
  if (fragmentation < 0.0 || fragmentation > 1.0) throw ConfigError("synth: fragmentation in [0, 1]");
  if (inversion_min_minutes < 1 || inversion_max_minutes < inversion_min_minutes) {
    throw ConfigError("synth: invalid inversion duration range");
  }
  if (sc_class_counts.size() != 4) throw ConfigError("synth: sc_class_counts needs four entries");
  for (const auto& [label, e] : class_effect) {
    if (e.amplitude_variability < 0.0 || e.fragmentation < 0.0) {
      throw ConfigError("synth: class effects must be non-negative");
    }
  }
  if (subjective_class_correlation < -1.0 || subjective_class_correlation > 1.0) {
    throw ConfigError("synth: subjective_class_correlation in [-1, 1]");
  }
  if (missing_bmi < 0 || missing_bmi > n_subjects) throw ConfigError("synth: missing_bmi out of range");
}

ClassEffect SynthConfig::effect_for(int label) const {
  const auto it = class_effect.find(label);
  return it == class_effect.end() ? ClassEffect{} : it->second;
}

namespace {

struct Inversion {
  std::int64_t start;
  std::int64_t end;
};

}  // namespace

SynthSubject generate_subject(const SynthConfig& cfg, int class_label, std::uint64_t index,
                              const std::string& participant_id) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, index + 1));
  const ClassEffect effect = cfg.effect_for(class_label);
  const std::int64_t day_minutes = 24 * 60;
  const auto active = static_cast<std::int64_t>(std::llround(cfg.active_hours * 60.0));
  const std::int64_t total = day_minutes * cfg.days;

  std::vector<double> amplitude(static_cast<std::size_t>(cfg.days));
  const double cv = cfg.amplitude_variability * effect.amplitude_variability;
  for (auto& a : amplitude) a = cfg.day_amplitude * std::max(0.1, 1.0 + cv * rng.normal());

  // Base segments: alternating active/rest blocks of each day.
  std::vector<SegmentRow> base;
  for (int d = 0; d < cfg.days; ++d) {
    const std::int64_t start = d * day_minutes;
    base.push_back({participant_id, SegmentKind::Activity, start, start + active});
    base.push_back({participant_id, SegmentKind::Rest, start + active, start + day_minutes});
  }

  // Inversions sit strictly inside one base block and never overlap.
  const double p = std::min(1.0, cfg.fragmentation * effect.fragmentation);
  std::vector<Inversion> inversions;
  for (std::int64_t hour = 0; hour < total / 60; ++hour) {
    if (!(rng.uniform() < p)) continue;
    const std::int64_t start = hour * 60 + rng.uniform_int(0, 59);
    const std::int64_t len = rng.uniform_int(cfg.inversion_min_minutes, cfg.inversion_max_minutes);
    const std::int64_t end = start + len;
    const auto host = std::find_if(base.begin(), base.end(), [&](const SegmentRow& b) {
      return b.start_minute <= start && start < b.end_minute;
    });
    if (start <= host->start_minute || end >= host->end_minute) continue;
    if (!inversions.empty() && start <= inversions.back().end) continue;
    inversions.push_back({start, end});
  }

  SynthSubject out;
  out.series.participant_id = participant_id;
  out.series.start_time = parse_timestamp(cfg.start_time, "synth.start_time");
  out.series.epochs.reserve(static_cast<std::size_t>(total));
  std::size_t inv = 0;
  for (const auto& b : base) {
    std::int64_t cursor = b.start_minute;
    while (inv < inversions.size() && inversions[inv].start < b.end_minute) {
      const auto& iv = inversions[inv];
      const auto flipped = b.kind == SegmentKind::Activity ? SegmentKind::Rest : SegmentKind::Activity;
      out.truth.push_back({participant_id, b.kind, cursor, iv.start});
      out.truth.push_back({participant_id, flipped, iv.start, iv.end});
      cursor = iv.end;
      ++inv;
    }
    out.truth.push_back({participant_id, b.kind, cursor, b.end_minute});
  }

  for (const auto& seg : out.truth) {
    for (std::int64_t t = seg.start_minute; t < seg.end_minute; ++t) {
      const double level = seg.kind == SegmentKind::Activity
                               ? cfg.mesor + amplitude[static_cast<std::size_t>(t / day_minutes)]
                               : cfg.mesor;
      const double noise = cfg.noise_sd > 0.0 ? rng.normal(0.0, cfg.noise_sd) : 0.0;
      out.series.epochs.push_back({t, std::max(0.0, level + noise)});
    }
  }
  return out;
}

namespace {

double clamp_round(double v, double lo, double hi) {
  return std::round(std::clamp(v, lo, hi) * 100.0) / 100.0;
}

std::vector<int> scaled_class_counts(const SynthConfig& cfg) {
  std::vector<int> counts = cfg.sc_class_counts;
  const int sum = std::accumulate(counts.begin(), counts.end(), 0);
  if (sum == cfg.n_subjects) return counts;
  int assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    counts[i] = static_cast<int>(std::floor(static_cast<double>(cfg.sc_class_counts[i]) *
                                            cfg.n_subjects / std::max(sum, 1)));
    assigned += counts[i];
  }
  for (std::size_t i = 0; assigned < cfg.n_subjects; i = (i + 1) % counts.size(), ++assigned) {
    ++counts[i];
  }
  return counts;
}

}  // namespace

SynthCohort generate_cohort(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, 0));
  const auto n = static_cast<std::size_t>(cfg.n_subjects);

  std::vector<int> sc_class;
  const auto counts = scaled_class_counts(cfg);
  for (int c = 0; c < 4; ++c) sc_class.insert(sc_class.end(), static_cast<std::size_t>(counts[c]), c + 1);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(sc_class[i - 1], sc_class[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)))]);
  }

  std::vector<SubjectRecord> subjects(n);
  int fa_left = cfg.fa_positive;
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = subjects[i];
    char id[16];
    std::snprintf(id, sizeof id, "S%03zu", i + 1);
    s.participant_id = id;
    switch (sc_class[i]) {
      case 1: s.sc = static_cast<int>(rng.uniform_int(0, 1)); break;
      case 2: s.sc = 2; break;
      case 3: s.sc = 3; break;
      default: s.sc = static_cast<int>(rng.uniform_int(4, 7)); break;
    }
    if (fa_left > 0 && s.sc >= 3) {
      s.fa = 1;
      --fa_left;
    }
  }
  if (fa_left > 0) throw ConfigError("synth: not enough SC>=3 subjects for the FA prevalence");

  // Questionnaire scores shifted towards the class label.
  std::vector<double> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = target_label(subjects[i], cfg.effect_target);
  const double lmean = std::accumulate(label.begin(), label.end(), 0.0) / static_cast<double>(n);
  double lvar = 0.0;
  for (double l : label) lvar += (l - lmean) * (l - lmean);
  const double lsd = std::sqrt(lvar / static_cast<double>(n));
  const double rho = cfg.subjective_class_correlation;
  const double noise_w = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = subjects[i];
    const double z = lsd > 0.0 ? (label[i] - lmean) / lsd : 0.0;
    auto draw = [&](double mu, double sd, double lo, double hi) {
      return clamp_round(mu + sd * (rho * z + noise_w * rng.normal()), lo, hi);
    };
    s.sex = rng.uniform() < 0.262 ? 2 : 1;
    s.age = std::round(std::clamp(rng.normal(21.65, 9.64), 15.0, 62.0));
    s.bmi_pct = draw(47.75, 25.20, 0.0, 100.0);
    s.zsdsi = draw(47.27, 12.24, 25.0, 100.0);
    s.debq_restr = draw(2.20, 1.00, 1.0, 5.0);
    s.debq_extern = draw(2.93, 0.58, 1.0, 5.0);
    s.debq_emo = draw(1.96, 0.50, 1.0, 5.0);
    s.bmi_cat = *s.bmi_pct < 5.0 ? 1 : *s.bmi_pct < 85.0 ? 2 : *s.bmi_pct < 95.0 ? 3 : 4;
    s.ov_ob = *s.bmi_cat >= 3 ? 1 : 0;
    s.zsdsi_cat = *s.zsdsi >= 60.0 ? 1 : 0;
    s.debq_restr_cat = *s.debq_restr > 2.20 ? 1 : 0;
    s.debq_extern_cat = *s.debq_extern > 2.93 ? 1 : 0;
    s.debq_emo_cat = *s.debq_emo > 1.96 ? 1 : 0;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)))]);
  }
  for (int k = 0; k < cfg.missing_bmi; ++k) {
    auto& s = subjects[order[static_cast<std::size_t>(k)]];
    s.bmi_pct.reset();
    s.bmi_cat.reset();
    s.ov_ob.reset();
  }

  SynthCohort cohort;
  std::map<std::string, ActigramSeries> series;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = subjects[i];
    auto subj = generate_subject(cfg, target_label(s, cfg.effect_target), i, s.participant_id);
    cohort.truth.emplace(s.participant_id, std::move(subj.truth));
    series.emplace(s.participant_id, std::move(subj.series));
  }
  cohort.dataset = assemble_dataset(std::move(subjects), std::move(series));
  return cohort;
}

void write_truth_csv(std::ostream& out, const SynthCohort& cohort) {
  out << "participant_id,kind,start_minute,end_minute\n";
  for (const auto& s : cohort.dataset.subjects) {
    for (const auto& r : cohort.truth.at(s.participant_id)) {
      out << csv::escape(r.participant_id) << ',' << to_string(r.kind) << ',' << r.start_minute
          << ',' << r.end_minute << '\n';
    }
  }
}

}  // namespace actimetry
