#pragma once

#include <span>
#include <vector>

// Entropy estimators over one segment. Every function returns a missing
// value (NaN) when the segment is too short for its embedding, and 0 for
// the degenerate inputs noted per function. All results are normalized.

namespace actimetry {

/// Permutation entropy of ordinal patterns of order `m` at delay `tau`,
/// normalized by ln(m!). Ties rank by order of occurrence.
double perm_entropy(std::span<const double> x, int m, int tau);

/// Fuzzy entropy with mean-centred templates, Chebyshev distance, and
/// membership exp(-(d / (r * sd))^n). Zero-variance input gives 0.
double fuzzy_entropy(std::span<const double> x, int m, double r, double n, int tau);

/// Same as fuzzy_entropy for several tolerances, sharing the distance pass.
std::vector<double> fuzzy_entropy_grid(std::span<const double> x, int m, std::span<const double> rs,
                                       double n, int tau);

/// Distribution entropy: log2 entropy of the histogram of pairwise
/// Chebyshev distances between length-m templates, normalized by log2(bins).
double dist_entropy(std::span<const double> x, int m, int bins);

std::vector<double> dist_entropy_grid(std::span<const double> x, int m, std::span<const int> bins);

/// Entropy of the normalized singular spectrum of the delay-embedding
/// matrix, normalized by ln(m).
double svd_entropy(std::span<const double> x, int m, int tau);

/// Singular values (descending) of a row-major rows x cols matrix, by
/// one-sided Jacobi rotations.
std::vector<double> singular_values(std::span<const double> row_major, std::size_t rows,
                                    std::size_t cols);

/// Angular entropy of the second-order difference plot over `sectors`
/// equal sectors, normalized by ln(sectors). Points at the origin are ignored.
double phase_entropy(std::span<const double> x, int sectors, int tau);

}  // namespace actimetry
