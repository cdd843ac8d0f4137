#include "plot.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace topcap::cli {

namespace {

constexpr double kWidth = 480.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;  // essential classes sit at kTop / 2
constexpr double kBottom = 50.0;

const char* colour(int dim) { return dim == 0 ? "#1f77b4" : dim == 1 ? "#d62728" : "#2ca02c"; }

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_diagram_svg(std::span<const PersistenceDiagram> diagrams, std::string_view title) {
  double extent = 0.0;
  for (const auto& d : diagrams)
    for (const auto& p : d.points) {
      extent = std::max(extent, p.birth);
      if (std::isfinite(p.death)) extent = std::max(extent, p.lifetime());
    }
  if (!(extent > 0.0)) extent = 1.0;
  extent *= 1.05;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + plot_w * v / extent; };
  auto sy = [&](double v) { return kHeight - kBottom - plot_h * v / extent; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      kWidth, kHeight);
  svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
  if (!title.empty())
    svg += fmt::format("<text x=\"{}\" y=\"16\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n",
                       kWidth / 2, escape(title));

  // Axes, ticks, labels.
  svg += fmt::format("<line class=\"axis\" x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n",
                     kLeft, kHeight - kBottom, kWidth - kRight);
  svg += fmt::format("<line class=\"axis\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n",
                     kLeft, kHeight - kBottom, kTop);
  for (int t = 0; t <= 4; ++t) {
    const double v = extent * t / 4.0;
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"10\">{:.3g}</text>\n", sx(v),
        kHeight - kBottom + 14, v);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\" font-size=\"10\">{:.3g}</text>\n",
                       kLeft - 4, sy(v) + 3, v);
  }
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"12\">birth</text>\n",
                     kLeft + plot_w / 2, kHeight - 12);
  svg += fmt::format(
      "<text x=\"14\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"12\" "
      "transform=\"rotate(-90 14 {:.2f})\">lifetime</text>\n",
      kTop + plot_h / 2, kTop + plot_h / 2);
  svg += fmt::format(
      "<line class=\"diagonal\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#999\" "
      "stroke-dasharray=\"4 3\"/>\n",
      sx(0), sy(0), sx(extent), sy(extent));

  for (const auto& d : diagrams) {
    for (const auto& p : d.points) {
      if (std::isfinite(p.death)) {
        svg += fmt::format(
            "<circle class=\"dim{}\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\" fill-opacity=\"0.7\"/>\n",
            d.dim, sx(p.birth), sy(p.lifetime()), colour(d.dim));
      } else {
        const double x = sx(p.birth);
        const double y = kTop / 2 + 6;
        svg += fmt::format(
            "<polygon class=\"dim{} essential\" points=\"{:.2f},{:.2f} {:.2f},{:.2f} {:.2f},{:.2f}\" fill=\"{}\"/>\n",
            d.dim, x, y - 8, x - 5, y, x + 5, y, colour(d.dim));
      }
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace topcap::cli
