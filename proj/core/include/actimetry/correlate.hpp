#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "actimetry/features.hpp"
#include "actimetry/ingest.hpp"

namespace actimetry {

enum class Stars { None, P05, P01 };

/// "" / "*" / "**".
const char* to_string(Stars s);
/// ** when p < 0.01, * when p < 0.05.
Stars stars_for(double p);

struct CorrelationCell {
  double r = 0.0;
  std::size_t n = 0;
  double p = 1.0;
  Stars stars = Stars::None;
};

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

/// Two-tailed p-value of a Student-t statistic with `dof` degrees of freedom.
double student_t_two_tailed(double t, double dof);

/// Sample Pearson correlation after pairwise deletion of NaN entries, with
/// a two-tailed t-test p-value on n - 2 degrees of freedom.
CorrelationCell pearson_r(std::span<const double> x, std::span<const double> y);

/// The five subjective columns correlated against actimetric features.
const std::vector<std::string>& correlation_subjective_columns();

struct CorrelationTable {
  std::vector<std::string> features;  // rows
  std::vector<std::string> subjective;  // columns
  /// cells[row][col]; empty when fewer than three pairs remain or a
  /// variable is constant.
  std::vector<std::vector<std::optional<CorrelationCell>>> cells;
};

CorrelationTable correlation_table(const FeatureTable& features,
                                   std::span<const SubjectRecord> subjects,
                                   std::span<const std::string> selected);

/// `group,aggregation,method,<subjective...>`; cells print r with stars when
/// p < 0.05, "-" otherwise, "n/a" when unavailable.
void write_correlation_csv(std::ostream& out, const CorrelationTable& table);

}  // namespace actimetry
