#include "actimetry/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "actimetry/error.hpp"
#include "actimetry/missing.hpp"
#include "actimetry/stats.hpp"

namespace actimetry {
namespace {

double shannon(std::span<const std::size_t> counts, std::size_t total) {
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

// Chebyshev distances between all template pairs i < j. Templates start at
// i = 0..count-1 and take `m` samples spaced by `tau`, optionally centred.
std::vector<double> pairwise_chebyshev(std::span<const double> x, int m, int tau,
                                       std::size_t count, bool centre) {
  const auto mm = static_cast<std::size_t>(m);
  const auto step = static_cast<std::size_t>(tau);
  std::vector<double> templ(count * mm);
  for (std::size_t i = 0; i < count; ++i) {
    double mu = 0.0;
    for (std::size_t k = 0; k < mm; ++k) {
      templ[i * mm + k] = x[i + k * step];
      mu += templ[i * mm + k];
    }
    if (centre) {
      mu /= static_cast<double>(mm);
      for (std::size_t k = 0; k < mm; ++k) templ[i * mm + k] -= mu;
    }
  }
  std::vector<double> d;
  d.reserve(count * (count - 1) / 2);
  for (std::size_t i = 0; i < count; ++i) {
    const double* a = &templ[i * mm];
    for (std::size_t j = i + 1; j < count; ++j) {
      const double* b = &templ[j * mm];
      double dist = 0.0;
      for (std::size_t k = 0; k < mm; ++k) dist = std::max(dist, std::abs(a[k] - b[k]));
      d.push_back(dist);
    }
  }
  return d;
}

double fuzzy_phi(std::span<const double> dists, double r_abs, double n) {
  if (dists.empty()) return 0.0;
  double sum = 0.0;
  if (n == 2.0) {
    const double inv = 1.0 / (r_abs * r_abs);
    for (double d : dists) sum += std::exp(-d * d * inv);
  } else {
    for (double d : dists) sum += std::exp(-std::pow(d / r_abs, n));
  }
  return sum / static_cast<double>(dists.size());
}

}  // namespace

double perm_entropy(std::span<const double> x, int m, int tau) {
  require(m >= 1 && tau >= 1, "perm_entropy: m and tau must be >= 1");
  const auto span = static_cast<std::size_t>((m - 1) * tau);
  if (x.size() < span + 2) return kMissing;
  if (m == 1) return 0.0;
  const std::size_t windows = x.size() - span;
  const auto mm = static_cast<std::size_t>(m);
  std::vector<std::size_t> order(mm);
  std::unordered_map<std::uint64_t, std::size_t> counts;
  for (std::size_t i = 0; i < windows; ++i) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return x[i + a * static_cast<std::size_t>(tau)] < x[i + b * static_cast<std::size_t>(tau)];
    });
    std::uint64_t key = 0;
    for (auto o : order) key = key * mm + o;
    ++counts[key];
  }
  std::vector<std::size_t> c;
  c.reserve(counts.size());
  for (const auto& [_, v] : counts) c.push_back(v);
  std::sort(c.begin(), c.end());
  double log_fact = 0.0;
  for (int k = 2; k <= m; ++k) log_fact += std::log(static_cast<double>(k));
  return shannon(c, windows) / log_fact;
}

std::vector<double> fuzzy_entropy_grid(std::span<const double> x, int m, std::span<const double> rs,
                                       double n, int tau) {
  require(m >= 1 && tau >= 1 && n > 0.0, "fuzzy_entropy: m, tau, n must be positive");
  for (double r : rs) require(r > 0.0, "fuzzy_entropy: r must be positive");
  const auto reach = static_cast<std::size_t>(m * tau);
  std::vector<double> out(rs.size(), kMissing);
  if (x.size() < reach + 2) return out;
  const double sd = sample_std(x);
  if (sd == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return out;
  }
  const std::size_t count = x.size() - reach;
  const auto dm = pairwise_chebyshev(x, m, tau, count, true);
  const auto dm1 = pairwise_chebyshev(x, m + 1, tau, count, true);
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const double r_abs = rs[k] * sd;
    const double phi_m = fuzzy_phi(dm, r_abs, n);
    const double phi_m1 = fuzzy_phi(dm1, r_abs, n);
    if (phi_m > 0.0 && phi_m1 > 0.0) out[k] = std::log(phi_m) - std::log(phi_m1);
  }
  return out;
}

double fuzzy_entropy(std::span<const double> x, int m, double r, double n, int tau) {
  const double rs[] = {r};
  return fuzzy_entropy_grid(x, m, rs, n, tau).front();
}

std::vector<double> dist_entropy_grid(std::span<const double> x, int m, std::span<const int> bins) {
  require(m >= 1, "dist_entropy: m must be >= 1");
  for (int b : bins) require(b >= 2, "dist_entropy: bins must be >= 2");
  std::vector<double> out(bins.size(), kMissing);
  if (x.size() < static_cast<std::size_t>(m) + 1) return out;
  const std::size_t count = x.size() - static_cast<std::size_t>(m) + 1;
  const auto d = pairwise_chebyshev(x, m, 1, count, false);
  const auto [lo_it, hi_it] = std::minmax_element(d.begin(), d.end());
  const double lo = *lo_it;
  const double width = *hi_it - lo;
  for (std::size_t k = 0; k < bins.size(); ++k) {
    if (width <= 0.0) {
      out[k] = 0.0;
      continue;
    }
    const auto nb = static_cast<std::size_t>(bins[k]);
    std::vector<std::size_t> hist(nb, 0);
    for (double v : d) {
      auto idx = static_cast<std::size_t>((v - lo) / width * static_cast<double>(nb));
      ++hist[std::min(idx, nb - 1)];
    }
    out[k] = shannon(hist, d.size()) / std::log(static_cast<double>(nb));
  }
  return out;
}

double dist_entropy(std::span<const double> x, int m, int bins) {
  const int b[] = {bins};
  return dist_entropy_grid(x, m, b).front();
}

std::vector<double> singular_values(std::span<const double> row_major, std::size_t rows,
                                    std::size_t cols) {
  // Column-major copy; rotate column pairs until mutually orthogonal.
  std::vector<double> a(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) a[c * rows + r] = row_major[r * cols + c];
  }
  constexpr int kMaxSweeps = 60;
  constexpr double kEps = 1e-15;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double* cp = &a[p * rows];
        double* cq = &a[q * rows];
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += cp[i] * cp[i];
          beta += cq[i] * cq[i];
          gamma += cp[i] * cq[i];
        }
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double xp = cp[i];
          const double xq = cq[i];
          cp[i] = c * xp - s * xq;
          cq[i] = s * xp + c * xq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    double ss = 0.0;
    for (std::size_t i = 0; i < rows; ++i) ss += a[c * rows + i] * a[c * rows + i];
    sv[c] = std::sqrt(ss);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double svd_entropy(std::span<const double> x, int m, int tau) {
  require(m >= 1 && tau >= 1, "svd_entropy: m and tau must be >= 1");
  const auto span = static_cast<std::size_t>((m - 1) * tau);
  if (x.size() < span + 1) return kMissing;
  if (m == 1) return 0.0;
  const std::size_t rows = x.size() - span;
  const auto cols = static_cast<std::size_t>(m);
  std::vector<double> traj(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) traj[r * cols + c] = x[r + c * static_cast<std::size_t>(tau)];
  }
  const auto sv = singular_values(traj, rows, cols);
  const double total = std::accumulate(sv.begin(), sv.end(), 0.0);
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double s : sv) {
    const double p = s / total;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h / std::log(static_cast<double>(m));
}

namespace {

// q when the direction (dx, dy) lies exactly at angle q * pi / 4, else -1.
int octant_multiple(double dx, double dy) {
  if (dy == 0.0) return dx > 0.0 ? 0 : 4;
  if (dx == 0.0) return dy > 0.0 ? 2 : 6;
  if (std::abs(dx) != std::abs(dy)) return -1;
  if (dy > 0.0) return dx > 0.0 ? 1 : 3;
  return dx < 0.0 ? 5 : 7;
}

}  // namespace

double phase_entropy(std::span<const double> x, int sectors, int tau) {
  require(sectors >= 2 && tau >= 1, "phase_entropy: sectors >= 2 and tau >= 1 required");
  const auto step = static_cast<std::size_t>(tau);
  if (x.size() < 2 * step + 1) return kMissing;
  const auto ns = static_cast<std::size_t>(sectors);
  const double width = 2.0 * std::numbers::pi / static_cast<double>(ns);
  std::vector<std::size_t> hist(ns, 0);
  std::size_t total = 0;
  for (std::size_t k = 0; k + 2 * step < x.size(); ++k) {
    const double dx = x[k + step] - x[k];
    const double dy = x[k + 2 * step] - x[k + step];
    if (dx == 0.0 && dy == 0.0) continue;
    std::size_t idx;
    if (const int q = octant_multiple(dx, dy); q >= 0) {
      idx = static_cast<std::size_t>(q) * ns / 8;
    } else {
      double theta = std::atan2(dy, dx);
      if (theta < 0.0) theta += 2.0 * std::numbers::pi;
      idx = std::min(static_cast<std::size_t>(theta / width), ns - 1);
    }
    ++hist[idx];
    ++total;
  }
  if (total == 0) return 0.0;
  return shannon(hist, total) / std::log(static_cast<double>(ns));
}

}  // namespace actimetry
