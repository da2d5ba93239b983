#include <algorithm>
#include <cstdio>
#include <string>

#include "ftlab/cli/commands.hpp"

namespace ftlab::cli {
namespace {

std::string fmt(const char* pattern, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

std::string render_svg(const analysis::FtReport& report) {
  constexpr double kW = 960, kH = 420, kLeft = 70, kRight = 70, kTop = 40, kBottom = 50;
  const auto& recs = report.records;
  const std::size_t n = recs.size();
  double d_max = 1e-3;
  for (const auto& r : recs) d_max = std::max({d_max, r.d_bare, r.d_enc});
  d_max *= 1.1;

  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;
  auto x_of = [&](std::size_t i) { return kLeft + (n > 1 ? plot_w * static_cast<double>(i) / (n - 1) : plot_w / 2); };
  auto y_d = [&](double d) { return kTop + plot_h * (1.0 - d / d_max); };
  auto y_r = [&](double r) { return kTop + plot_h * (1.0 - r); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"420\" font-family=\"sans-serif\" "
       "font-size=\"12\">\n";
  s += "<rect width=\"960\" height=\"420\" fill=\"white\"/>\n";
  s += "<rect x=\"" + fmt("%.1f", kLeft) + "\" y=\"" + fmt("%.1f", kTop) + "\" width=\"" + fmt("%.1f", plot_w) +
       "\" height=\"" + fmt("%.1f", plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double frac = k / 4.0;
    const double y = kTop + plot_h * (1.0 - frac);
    s += "<text x=\"" + fmt("%.1f", kLeft - 6) + "\" y=\"" + fmt("%.1f", y + 4) + "\" text-anchor=\"end\">" +
         fmt("%.3g", frac * d_max) + "</text>\n";
    s += "<text x=\"" + fmt("%.1f", kW - kRight + 6) + "\" y=\"" + fmt("%.1f", y + 4) + "\">" + fmt("%.2f", frac) +
         "</text>\n";
  }
  const std::size_t tick_every = std::max<std::size_t>(1, n / 20);
  for (std::size_t i = 0; i < n; i += tick_every) {
    s += "<text x=\"" + fmt("%.1f", x_of(i)) + "\" y=\"" + fmt("%.1f", kH - kBottom + 16) +
         "\" text-anchor=\"middle\">" + std::to_string(recs[i].circuit_id) + "</text>\n";
  }
  s += "<text x=\"480\" y=\"412\" text-anchor=\"middle\">circuit id</text>\n";
  s += "<text x=\"16\" y=\"210\" transform=\"rotate(-90 16 210)\" text-anchor=\"middle\">statistical distance D</text>\n";
  s += "<text x=\"948\" y=\"210\" transform=\"rotate(90 948 210)\" text-anchor=\"middle\">postselection ratio r</text>\n";

  auto polyline = [&](auto value, const char* colour) {
    std::string pts;
    for (std::size_t i = 0; i < n; ++i) pts += fmt("%.2f", x_of(i)) + "," + fmt("%.2f", y_d(value(recs[i]))) + " ";
    return "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" + pts +
           "\"/>\n";
  };
  s += polyline([](const analysis::FtRecord& r) { return r.d_bare; }, "#1f77b4");
  s += polyline([](const analysis::FtRecord& r) { return r.d_enc; }, "#d62728");
  for (std::size_t i = 0; i < n; ++i) {
    s += "<circle cx=\"" + fmt("%.2f", x_of(i)) + "\" cy=\"" + fmt("%.2f", y_r(recs[i].ratio)) +
         "\" r=\"2.5\" fill=\"#555555\"/>\n";
  }

  s += "<g transform=\"translate(80,22)\">"
       "<line x1=\"0\" y1=\"0\" x2=\"20\" y2=\"0\" stroke=\"#1f77b4\" stroke-width=\"2\"/>"
       "<text x=\"24\" y=\"4\">D bare</text>"
       "<line x1=\"90\" y1=\"0\" x2=\"110\" y2=\"0\" stroke=\"#d62728\" stroke-width=\"2\"/>"
       "<text x=\"114\" y=\"4\">D encoded</text>"
       "<circle cx=\"200\" cy=\"0\" r=\"3\" fill=\"#555555\"/><text x=\"206\" y=\"4\">r</text>"
       "<text x=\"240\" y=\"4\">P = " +
       fmt("%.1f", report.percentage_p) + "%, criterion " + (report.criterion_pass ? "met" : "not met") +
       "</text></g>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace ftlab::cli
