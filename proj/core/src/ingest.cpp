#include "actimetry/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

#include "actimetry/csv.hpp"
#include "actimetry/error.hpp"

namespace actimetry {

std::vector<Gap> ActigramSeries::gaps() const {
  std::vector<Gap> out;
  for (std::size_t i = 1; i < epochs.size(); ++i) {
    const std::int64_t hole = epochs[i].minute_index - epochs[i - 1].minute_index - 1;
    if (hole > 0) out.push_back({epochs[i - 1].minute_index + 1, hole});
  }
  return out;
}

std::int64_t ActigramSeries::span_minutes() const {
  if (epochs.empty()) return 0;
  return epochs.back().minute_index - epochs.front().minute_index + 1;
}

void validate_series(const ActigramSeries& series) {
  const std::string who = "participant '" + series.participant_id + "'";
  if (series.epochs.empty()) throw EmptyDataError(who + ": series has no epochs");
  for (std::size_t i = 0; i < series.epochs.size(); ++i) {
    const auto& e = series.epochs[i];
    if (e.minute_index < 0) throw FormatError(who + ": negative minute index");
    if (!(e.count >= 0.0) || !std::isfinite(e.count)) {
      throw FormatError(who + ": invalid count at minute " + std::to_string(e.minute_index));
    }
    if (i > 0 && e.minute_index <= series.epochs[i - 1].minute_index) {
      throw FormatError(who + ": minute " + std::to_string(e.minute_index) +
                        (e.minute_index == series.epochs[i - 1].minute_index ? " duplicated"
                                                                             : " out of order"));
    }
  }
  const auto span = series.span_minutes();
  if (span < kMinDurationMinutes || span > kMaxDurationMinutes) {
    throw FormatError(who + ": recording spans " + std::to_string(span) +
                      " minutes, outside the supported 1..14 day range");
  }
}

std::vector<MinuteEpoch> bin_raw(std::span<const RawAccelSample> samples) {
  if (samples.empty()) throw EmptyDataError("bin_raw: no samples");
  std::vector<MinuteEpoch> out;
  const RawAccelSample* prev = &samples.front();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.t < 0) throw FormatError("bin_raw: negative timestamp " + std::to_string(s.t));
    if (i > 0 && s.t <= samples[i - 1].t) {
      throw FormatError("bin_raw: non-monotone timestamp at sample " + std::to_string(i) +
                        " (t=" + std::to_string(s.t) + ")");
    }
    const std::int64_t minute = s.t / 60;
    if (out.empty() || out.back().minute_index != minute) out.push_back({minute, 0.0});
    out.back().count += std::abs(s.x - prev->x) + std::abs(s.y - prev->y);
    prev = &s;
  }
  return out;
}

std::vector<SamplingGap> find_sampling_gaps(std::span<const RawAccelSample> samples) {
  std::vector<SamplingGap> gaps;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const auto step = samples[i].t - samples[i - 1].t;
    if (step > 1) gaps.push_back({samples[i - 1].t, step - 1});
  }
  return gaps;
}

std::string format_timestamp(TimePoint t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

TimePoint parse_timestamp(std::string_view text, const std::string& where) {
  using namespace std::chrono;
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char sep = 0;
  int consumed = 0;
  const std::string str(text);
  const int got = std::sscanf(str.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d%n", &y, &mo, &d, &sep, &h,
                              &mi, &s, &consumed);
  const bool tail_ok = got == 7 && (static_cast<std::size_t>(consumed) == str.size() ||
                                    (static_cast<std::size_t>(consumed) + 1 == str.size() &&
                                     str.back() == 'Z'));
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!tail_ok || (sep != 'T' && sep != ' ') || !ymd.ok() || h > 23 || mi > 59 || s > 59 ||
      h < 0 || mi < 0 || s < 0) {
    throw FormatError(where + ": bad ISO-8601 timestamp '" + str + "'");
  }
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

namespace {

ActigramSeries finish_series(ActigramSeries series) {
  validate_series(series);
  return series;
}

std::map<std::string, ActigramSeries> parse_minute_csv(const csv::Table& table) {
  const auto id_col = table.column("participant_id");
  const auto ts_col = table.column("timestamp_iso8601");
  const auto count_col = table.column("count");

  std::map<std::string, ActigramSeries> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = table.where(r);
    const std::string& id = row[id_col];
    if (id.empty()) throw FormatError(where + ": empty participant_id");
    const TimePoint ts = parse_timestamp(row[ts_col], where);
    const double count = csv::parse_number(row[count_col], where);
    if (count < 0.0) throw FormatError(where + ": negative count " + row[count_col]);

    auto [it, fresh] = out.try_emplace(id);
    auto& series = it->second;
    if (fresh) {
      series.participant_id = id;
      series.start_time = ts;
    }
    const auto offset = (ts - series.start_time).count();
    if (offset % 60 != 0) throw FormatError(where + ": timestamp not on the minute grid");
    const std::int64_t minute = offset / 60;
    if (!series.epochs.empty()) {
      const auto last = series.epochs.back().minute_index;
      if (minute == last) {
        throw FormatError(where + ": duplicate minute " + std::to_string(minute) +
                          " for participant '" + id + "'");
      }
      if (minute < last) {
        throw FormatError(where + ": non-monotone timestamp for participant '" + id + "'");
      }
    } else if (minute < 0) {
      throw FormatError(where + ": non-monotone timestamp for participant '" + id + "'");
    }
    series.epochs.push_back({minute, count});
  }
  for (auto& [id, series] : out) series = finish_series(std::move(series));
  return out;
}

std::map<std::string, std::vector<RawAccelSample>> group_raw(const csv::Table& table) {
  const auto id_col = table.column("participant_id");
  const auto t_col = table.column("t_seconds");
  const auto x_col = table.column("x");
  const auto y_col = table.column("y");
  std::map<std::string, std::vector<RawAccelSample>> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = table.where(r);
    if (row[id_col].empty()) throw FormatError(where + ": empty participant_id");
    RawAccelSample s{csv::parse_integer(row[t_col], where), csv::parse_number(row[x_col], where),
                     csv::parse_number(row[y_col], where)};
    auto& samples = out[row[id_col]];
    if (!samples.empty() && s.t <= samples.back().t) {
      throw FormatError(where + ": non-monotone timestamp");
    }
    samples.push_back(s);
  }
  return out;
}

std::map<std::string, ActigramSeries> parse_table(const csv::Table& table, InputFormat format) {
  if (format == InputFormat::MinuteCsv) return parse_minute_csv(table);
  std::map<std::string, ActigramSeries> out;
  for (auto& [id, samples] : group_raw(table)) {
    ActigramSeries series;
    series.participant_id = id;
    series.epochs = bin_raw(samples);
    out.emplace(id, finish_series(std::move(series)));
  }
  return out;
}

}  // namespace

std::map<std::string, ActigramSeries> parse_actigrams(std::istream& in, const std::string& source,
                                                      InputFormat format) {
  const auto table = csv::read(in, source);
  auto out = parse_table(table, format);
  if (out.empty()) throw EmptyDataError(source + ": no data rows");
  return out;
}

std::map<std::string, ActigramSeries> parse_actigrams(const std::filesystem::path& path,
                                                      InputFormat format) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return parse_actigrams(in, path.string(), format);
}

ActigramSeries parse_actigram(const std::filesystem::path& path, InputFormat format) {
  auto all = parse_actigrams(path, format);
  if (all.size() != 1) {
    throw FormatError(path.string() + ": expected one participant, found " +
                      std::to_string(all.size()));
  }
  return std::move(all.begin()->second);
}

std::map<std::string, std::vector<RawAccelSample>> parse_raw_samples(std::istream& in,
                                                                     const std::string& source) {
  return group_raw(csv::read(in, source));
}

void write_actigram_csv(std::ostream& out, const ActigramSeries& series, bool header) {
  if (header) out << "participant_id,timestamp_iso8601,count\n";
  const std::string id = csv::escape(series.participant_id);
  for (const auto& e : series.epochs) {
    out << id << ',' << format_timestamp(series.start_time + std::chrono::minutes{e.minute_index})
        << ',' << csv::format_number(e.count) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Subjects

int sc_to_class(int sc) {
  if (sc < 0 || sc > 7) throw FormatError("symptom count " + std::to_string(sc) + " outside 0..7");
  if (sc <= 1) return 1;
  if (sc <= 3) return sc;
  return 4;
}

int SubjectRecord::sc_class() const { return sc_to_class(sc); }

const std::vector<std::string>& subject_columns() {
  static const std::vector<std::string> cols = {
      "participant_id", "sex",         "age",           "bmi_pct",         "bmi_cat",
      "ov_ob",          "zsdsi",       "zsdsi_cat",     "debq_restr",      "debq_extern",
      "debq_emo",       "debq_restr_cat", "debq_extern_cat", "debq_emo_cat", "fa",
      "sc"};
  return cols;
}

const std::vector<std::string>& subjective_feature_names() {
  static const std::vector<std::string> cols = [] {
    const auto& all = subject_columns();
    return std::vector<std::string>(all.begin() + 1, all.end() - 2);
  }();
  return cols;
}

std::optional<double> subject_value(const SubjectRecord& s, std::string_view column) {
  auto as_double = [](const std::optional<int>& v) -> std::optional<double> {
    if (v) return static_cast<double>(*v);
    return std::nullopt;
  };
  if (column == "sex") return as_double(s.sex);
  if (column == "age") return s.age;
  if (column == "bmi_pct") return s.bmi_pct;
  if (column == "bmi_cat") return as_double(s.bmi_cat);
  if (column == "ov_ob") return as_double(s.ov_ob);
  if (column == "zsdsi") return s.zsdsi;
  if (column == "zsdsi_cat") return as_double(s.zsdsi_cat);
  if (column == "debq_restr") return s.debq_restr;
  if (column == "debq_extern") return s.debq_extern;
  if (column == "debq_emo") return s.debq_emo;
  if (column == "debq_restr_cat") return as_double(s.debq_restr_cat);
  if (column == "debq_extern_cat") return as_double(s.debq_extern_cat);
  if (column == "debq_emo_cat") return as_double(s.debq_emo_cat);
  if (column == "fa") return s.fa;
  if (column == "sc") return s.sc;
  throw ConfigError("unknown subject column '" + std::string(column) + "'");
}

namespace {

struct SubjectRowReader {
  const csv::Table& table;
  std::size_t row;

  const std::string& cell(std::string_view name) const {
    return table.rows[row][table.column(name)];
  }

  std::optional<double> real(std::string_view name, double lo, double hi) const {
    const auto& c = cell(name);
    if (c.empty()) return std::nullopt;
    const double v = csv::parse_number(c, table.where(row));
    if (v < lo || v > hi) {
      throw FormatError(table.where(row) + ": " + std::string(name) + "=" + c + " outside [" +
                        csv::format_number(lo) + ", " + csv::format_number(hi) + "]");
    }
    return v;
  }

  std::optional<int> code(std::string_view name, std::initializer_list<int> allowed) const {
    const auto& c = cell(name);
    if (c.empty()) return std::nullopt;
    const auto v = csv::parse_integer(c, table.where(row));
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
      throw FormatError(table.where(row) + ": " + std::string(name) + "=" + c +
                        " is not a valid code");
    }
    return static_cast<int>(v);
  }

  int required_code(std::string_view name, std::initializer_list<int> allowed) const {
    auto v = code(name, allowed);
    if (!v) throw FormatError(table.where(row) + ": " + std::string(name) + " must not be missing");
    return *v;
  }
};

}  // namespace

std::vector<SubjectRecord> parse_subjects(std::istream& in, const std::string& source) {
  const auto table = csv::read(in, source);
  for (const auto& name : subject_columns()) table.column(name);

  std::vector<SubjectRecord> out;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const SubjectRowReader rd{table, r};
    SubjectRecord s;
    s.participant_id = rd.cell("participant_id");
    if (s.participant_id.empty()) throw FormatError(table.where(r) + ": empty participant_id");
    if (!seen.insert(s.participant_id).second) {
      throw FormatError(table.where(r) + ": duplicate participant '" + s.participant_id + "'");
    }
    s.sex = rd.code("sex", {1, 2});
    s.age = rd.real("age", 0, 120);
    s.bmi_pct = rd.real("bmi_pct", 0, 100);
    s.bmi_cat = rd.code("bmi_cat", {1, 2, 3, 4});
    s.ov_ob = rd.code("ov_ob", {0, 1});
    s.zsdsi = rd.real("zsdsi", 25, 100);
    s.zsdsi_cat = rd.code("zsdsi_cat", {0, 1});
    s.debq_restr = rd.real("debq_restr", 1, 5);
    s.debq_extern = rd.real("debq_extern", 1, 5);
    s.debq_emo = rd.real("debq_emo", 1, 5);
    s.debq_restr_cat = rd.code("debq_restr_cat", {0, 1});
    s.debq_extern_cat = rd.code("debq_extern_cat", {0, 1});
    s.debq_emo_cat = rd.code("debq_emo_cat", {0, 1});
    s.fa = rd.required_code("fa", {0, 1});
    s.sc = rd.required_code("sc", {0, 1, 2, 3, 4, 5, 6, 7});
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SubjectRecord> parse_subjects(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return parse_subjects(in, path.string());
}

void write_subjects_csv(std::ostream& out, std::span<const SubjectRecord> subjects) {
  const auto& cols = subject_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& s : subjects) {
    out << csv::escape(s.participant_id);
    for (std::size_t i = 1; i < cols.size(); ++i) {
      const auto v = subject_value(s, cols[i]);
      out << ',' << (v ? csv::format_number(*v) : std::string{});
    }
    out << '\n';
  }
}

ClassCounts Dataset::class_counts() const {
  ClassCounts counts;
  for (const auto& s : subjects) {
    ++counts.fa[s.fa];
    ++counts.sc_class[s.sc_class()];
  }
  return counts;
}

Dataset assemble_dataset(std::vector<SubjectRecord> subjects,
                         std::map<std::string, ActigramSeries> series) {
  for (const auto& s : subjects) {
    if (!series.contains(s.participant_id)) {
      throw FormatError("participant '" + s.participant_id + "' has no actigram series");
    }
  }
  if (series.size() != subjects.size()) {
    std::set<std::string> ids;
    for (const auto& s : subjects) ids.insert(s.participant_id);
    for (const auto& [id, _] : series) {
      if (!ids.contains(id)) throw FormatError("series '" + id + "' has no subject record");
    }
  }
  if (subjects.empty()) throw EmptyDataError("dataset has no subjects");
  return Dataset{std::move(subjects), std::move(series)};
}

}  // namespace actimetry
