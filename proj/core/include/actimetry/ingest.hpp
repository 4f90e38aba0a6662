#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace actimetry {

using TimePoint = std::chrono::sys_seconds;

/// One 1 Hz reading of the two-axis wrist accelerometer.
struct RawAccelSample {
  std::int64_t t = 0;  // seconds since recording start
  double x = 0.0;
  double y = 0.0;
};

struct MinuteEpoch {
  std::int64_t minute_index = 0;
  double count = 0.0;

  friend bool operator==(const MinuteEpoch&, const MinuteEpoch&) = default;
};

/// A run of minutes with no recorded epoch.
struct Gap {
  std::int64_t start_minute = 0;
  std::int64_t length = 0;

  friend bool operator==(const Gap&, const Gap&) = default;
};

/// Minute-resolution activity counts for one participant. Epochs are sorted
/// by minute index; absent minutes are gaps, never zeros.
struct ActigramSeries {
  std::string participant_id;
  TimePoint start_time{};
  std::vector<MinuteEpoch> epochs;

  std::vector<Gap> gaps() const;
  /// Minutes from the first to one past the last epoch.
  std::int64_t span_minutes() const;
};

/// Checks ordering, uniqueness, non-negative counts and the 1..14 day span.
void validate_series(const ActigramSeries& series);

inline constexpr std::int64_t kMinDurationMinutes = 24 * 60;
inline constexpr std::int64_t kMaxDurationMinutes = 14 * 24 * 60;

/// Sums |dx| + |dy| over each started minute. The first sample of a minute
/// is differenced against the last sample of the preceding minute; the very
/// first sample of the recording contributes zero.
std::vector<MinuteEpoch> bin_raw(std::span<const RawAccelSample> samples);

/// Holes in the 1 Hz grid (consecutive samples more than one second apart).
struct SamplingGap {
  std::int64_t after_t = 0;
  std::int64_t missing_seconds = 0;
};
std::vector<SamplingGap> find_sampling_gaps(std::span<const RawAccelSample> samples);

enum class InputFormat { MinuteCsv, RawCsv };

/// Parses every participant in an actigram file, keyed by participant id.
std::map<std::string, ActigramSeries> parse_actigrams(const std::filesystem::path& path,
                                                      InputFormat format = InputFormat::MinuteCsv);
std::map<std::string, ActigramSeries> parse_actigrams(std::istream& in, const std::string& source,
                                                      InputFormat format = InputFormat::MinuteCsv);

/// Parses a file holding exactly one participant.
ActigramSeries parse_actigram(const std::filesystem::path& path,
                              InputFormat format = InputFormat::MinuteCsv);

/// Raw samples of one file grouped by participant, in file order.
std::map<std::string, std::vector<RawAccelSample>> parse_raw_samples(std::istream& in,
                                                                     const std::string& source);

void write_actigram_csv(std::ostream& out, const ActigramSeries& series, bool header = true);

std::string format_timestamp(TimePoint t);
/// Accepts `YYYY-MM-DDTHH:MM:SS` with optional `Z`, fractional-free.
TimePoint parse_timestamp(std::string_view text, const std::string& where);

enum class Sex { Female = 1, Male = 2 };

/// Demographic and questionnaire columns of one participant. Optional
/// fields are empty when the source cell was blank.
struct SubjectRecord {
  std::string participant_id;
  std::optional<int> sex;
  std::optional<double> age;
  std::optional<double> bmi_pct;
  std::optional<int> bmi_cat;
  std::optional<int> ov_ob;
  std::optional<double> zsdsi;
  std::optional<int> zsdsi_cat;
  std::optional<double> debq_restr;
  std::optional<double> debq_extern;
  std::optional<double> debq_emo;
  std::optional<int> debq_restr_cat;
  std::optional<int> debq_extern_cat;
  std::optional<int> debq_emo_cat;
  int fa = 0;
  int sc = 0;

  /// SC binned into classes 1..4.
  int sc_class() const;
};

/// Column names of the subject CSV, in canonical order.
const std::vector<std::string>& subject_columns();

/// Names of the numeric subject columns usable as model features.
const std::vector<std::string>& subjective_feature_names();

/// Value of a numeric subject column by name; nullopt when missing.
std::optional<double> subject_value(const SubjectRecord& s, std::string_view column);

std::vector<SubjectRecord> parse_subjects(const std::filesystem::path& path);
std::vector<SubjectRecord> parse_subjects(std::istream& in, const std::string& source);
void write_subjects_csv(std::ostream& out, std::span<const SubjectRecord> subjects);

/// 0-1 symptoms -> 1, 2 -> 2, 3 -> 3, 4-7 -> 4.
int sc_to_class(int sc);

struct ClassCounts {
  std::map<int, int> fa;        // FA label -> count
  std::map<int, int> sc_class;  // SC class -> count
};

struct Dataset {
  std::vector<SubjectRecord> subjects;
  std::map<std::string, ActigramSeries> series;

  ClassCounts class_counts() const;
};

/// Pairs subjects with their series; every subject needs exactly one series
/// and every series a subject.
Dataset assemble_dataset(std::vector<SubjectRecord> subjects,
                         std::map<std::string, ActigramSeries> series);

}  // namespace actimetry
