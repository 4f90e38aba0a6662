#pragma once

#include <iosfwd>

#include <actimetry/segmentation.hpp>

namespace actimetry::cli {

/// Minute counts, smoothed curve, threshold line and shaded segment bands
/// over the cleaned timeline. Bands carry class="band activity" or
/// class="band rest".
void write_segmentation_svg(std::ostream& out, const Segmentation& seg);

}  // namespace actimetry::cli
