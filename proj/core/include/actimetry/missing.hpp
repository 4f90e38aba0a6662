#pragma once

#include <cmath>
#include <limits>

namespace actimetry {

// Missing numeric values are carried as quiet NaN throughout feature and
// model code; CSV writers render them as empty cells.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) noexcept { return std::isnan(v); }

}  // namespace actimetry
