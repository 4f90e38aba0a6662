#include "actimetry/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "actimetry/csv.hpp"
#include "actimetry/error.hpp"
#include "actimetry/missing.hpp"

namespace actimetry {

const char* to_string(Stars s) {
  switch (s) {
    case Stars::P01: return "**";
    case Stars::P05: return "*";
    default: return "";
  }
}

Stars stars_for(double p) {
  if (p < 0.01) return Stars::P01;
  if (p < 0.05) return Stars::P05;
  return Stars::None;
}

namespace {

// Continued fraction for I_x(a, b), evaluated where it converges fast.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw ConfigError("incomplete_beta: a and b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double dof) {
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
}

CorrelationCell pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("pearson_r: length mismatch");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (is_missing(x[i]) || is_missing(y[i])) continue;
    xs.push_back(x[i]);
    ys.push_back(y[i]);
  }
  const std::size_t n = xs.size();
  if (n < 3) throw InsufficientDataError("pearson_r: fewer than three complete pairs");
  long double mx = 0.0L, my = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<long double>(n);
  my /= static_cast<long double>(n);
  long double sxx = 0.0L, syy = 0.0L, sxy = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const long double dx = xs[i] - mx;
    const long double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0L || syy == 0.0L) throw UndefinedCorrelationError("pearson_r: zero variance");
  double r = static_cast<double>(sxy / std::sqrt(sxx * syy));
  r = std::clamp(r, -1.0, 1.0);

  CorrelationCell cell;
  cell.r = r;
  cell.n = n;
  const double dof = static_cast<double>(n - 2);
  if (std::abs(r) == 1.0) {
    cell.p = 0.0;
  } else if (dof == 0.0) {
    cell.p = 1.0;
  } else {
    const double t = r * std::sqrt(dof / (1.0 - r * r));
    cell.p = student_t_two_tailed(t, dof);
  }
  cell.stars = stars_for(cell.p);
  return cell;
}

const std::vector<std::string>& correlation_subjective_columns() {
  static const std::vector<std::string> cols = {"bmi_pct", "zsdsi", "debq_restr", "debq_extern",
                                                "debq_emo"};
  return cols;
}

CorrelationTable correlation_table(const FeatureTable& features,
                                   std::span<const SubjectRecord> subjects,
                                   std::span<const std::string> selected) {
  CorrelationTable table;
  table.subjective = correlation_subjective_columns();
  std::vector<std::size_t> rows;
  for (const auto& s : subjects) rows.push_back(features.row_index(s.participant_id));
  for (const auto& name : selected) {
    const auto col = features.column_index(name);
    std::vector<double> x;
    for (auto r : rows) x.push_back(features.rows[r][col]);
    std::vector<std::optional<CorrelationCell>> line;
    for (const auto& subj : table.subjective) {
      std::vector<double> y;
      for (const auto& s : subjects) y.push_back(subject_value(s, subj).value_or(kMissing));
      try {
        line.emplace_back(pearson_r(x, y));
      } catch (const InsufficientDataError&) {
        line.emplace_back(std::nullopt);
      } catch (const UndefinedCorrelationError&) {
        line.emplace_back(std::nullopt);
      }
    }
    table.features.push_back(name);
    table.cells.push_back(std::move(line));
  }
  return table;
}

void write_correlation_csv(std::ostream& out, const CorrelationTable& table) {
  out << "group,aggregation,method";
  for (const auto& s : table.subjective) out << ',' << s;
  out << '\n';
  for (std::size_t i = 0; i < table.features.size(); ++i) {
    const std::string& name = table.features[i];
    const auto first = name.find('.');
    const auto second = first == std::string::npos ? first : name.find('.', first + 1);
    if (second == std::string::npos) {
      out << ",," << csv::escape(name);
    } else {
      out << name.substr(0, first) << ',' << name.substr(first + 1, second - first - 1) << ','
          << csv::escape(name.substr(second + 1));
    }
    for (const auto& cell : table.cells[i]) {
      out << ',';
      if (!cell) {
        out << "n/a";
      } else if (cell->stars == Stars::None) {
        out << '-';
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", cell->r);
        out << buf << to_string(cell->stars);
      }
    }
    out << '\n';
  }
}

}  // namespace actimetry
