#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "actimetry/ingest.hpp"
#include "actimetry/model.hpp"
#include "actimetry/segmentation.hpp"

namespace actimetry {

/// Multipliers applied to a class's activity variability and fragmentation.
struct ClassEffect {
  double amplitude_variability = 1.0;
  double fragmentation = 1.0;

  friend bool operator==(const ClassEffect&, const ClassEffect&) = default;
};

struct SynthConfig {
  int n_subjects = 78;
  int fa_positive = 10;
  /// Subjects per SC class 1..4; rescaled when it does not sum to n_subjects.
  std::vector<int> sc_class_counts = {33, 16, 15, 14};
  int days = 7;
  double active_hours = 16.0;
  /// Rest-period level; activity periods sit at mesor + day amplitude.
  double mesor = 0.0;
  double day_amplitude = 100.0;
  /// Coefficient of variation of the per-day amplitude.
  double amplitude_variability = 0.1;
  double noise_sd = 10.0;
  /// Probability per hour of a brief activity/rest inversion.
  double fragmentation = 0.0;
  int inversion_min_minutes = 30;
  int inversion_max_minutes = 90;
  /// Effects keyed by class label of `effect_target` (FA 0/1 or SC 1..4).
  std::map<int, ClassEffect> class_effect;
  Target effect_target = Target::FA;
  /// Correlation of the synthesized questionnaire scores with the class.
  double subjective_class_correlation = 0.0;
  int missing_bmi = 3;
  std::uint64_t seed = 20190204;
  std::string start_time = "2019-02-04T07:00:00";

  void validate() const;
  ClassEffect effect_for(int label) const;
};

struct SynthSubject {
  ActigramSeries series;
  std::vector<SegmentRow> truth;  // planted segments in minutes, end exclusive
};

/// One participant whose activity is a day/night square wave with per-day
/// amplitude jitter, fragmentation inversions and Gaussian noise clipped at
/// zero. `index` selects the participant's random stream.
SynthSubject generate_subject(const SynthConfig& cfg, int class_label, std::uint64_t index,
                              const std::string& participant_id = "");

struct SynthCohort {
  Dataset dataset;
  std::map<std::string, std::vector<SegmentRow>> truth;
};

SynthCohort generate_cohort(const SynthConfig& cfg);

void write_truth_csv(std::ostream& out, const SynthCohort& cohort);

}  // namespace actimetry
