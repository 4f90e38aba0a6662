#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>

namespace actimetry::cli {

namespace {

constexpr double kWidth = 1200.0;
constexpr double kHeight = 320.0;
constexpr double kMargin = 40.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_segmentation_svg(std::ostream& out, const Segmentation& seg) {
  const auto& values = seg.cleaned.values;
  const std::size_t n = std::max<std::size_t>(values.size(), 1);
  double top = seg.threshold;
  for (double v : values) top = std::max(top, v);
  if (top <= 0.0) top = 1.0;
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  auto x_of = [&](double i) { return kMargin + plot_w * i / static_cast<double>(n); };
  auto y_of = [&](double v) { return kMargin + plot_h * (1.0 - v / top); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<title>" << escape(seg.participant_id) << "</title>\n";
  out << "<g class=\"bands\">\n";
  for (const auto& s : seg.segments) {
    const bool active = s.kind == SegmentKind::Activity;
    out << "<rect class=\"band " << (active ? "activity" : "rest") << "\" x=\"" << num(x_of(static_cast<double>(s.start)))
        << "\" y=\"" << num(kMargin) << "\" width=\"" << num(x_of(static_cast<double>(s.end)) - x_of(static_cast<double>(s.start)))
        << "\" height=\"" << num(plot_h) << "\" fill=\"" << (active ? "#f4c27a" : "#9db8d9")
        << "\" fill-opacity=\"0.35\"/>\n";
  }
  out << "</g>\n";

  auto polyline = [&](const std::vector<double>& v, const char* cls, const char* color, double width) {
    out << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
        << width << "\" points=\"";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << ' ';
      out << num(x_of(static_cast<double>(i) + 0.5)) << ',' << num(y_of(v[i]));
    }
    out << "\"/>\n";
  };
  polyline(values, "counts", "#808080", 0.5);
  polyline(seg.smoothed, "smoothed", "#1f4e8c", 1.5);
  out << "<line class=\"threshold\" x1=\"" << num(kMargin) << "\" x2=\"" << num(kWidth - kMargin)
      << "\" y1=\"" << num(y_of(seg.threshold)) << "\" y2=\"" << num(y_of(seg.threshold))
      << "\" stroke=\"#c0392b\" stroke-dasharray=\"6 4\"/>\n";
  out << "<rect class=\"frame\" x=\"" << num(kMargin) << "\" y=\"" << num(kMargin) << "\" width=\""
      << num(plot_w) << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"#333\"/>\n";
  out << "<text x=\"" << num(kMargin) << "\" y=\"" << num(kMargin - 12) << "\" font-size=\"14\">"
      << escape(seg.participant_id) << ": " << seg.count(SegmentKind::Activity) << " activity, "
      << seg.count(SegmentKind::Rest) << " rest, threshold " << num(seg.threshold) << "</text>\n";
  out << "</svg>\n";
}

}  // namespace actimetry::cli
