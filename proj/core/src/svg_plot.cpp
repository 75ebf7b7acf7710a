#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "pgreuse/harness.hpp"

namespace pgreuse {

namespace {

const char* kPalette[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                          "#66ccee", "#aa3377", "#bbbbbb", "#000000"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// Round a tick step to 1/2/5 times a power of ten.
double nice_step(double range, int target_ticks) {
  const double raw = range / std::max(target_ticks, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace

void emit_plot(const std::vector<AggregateCurve>& curves, const std::string& out_path,
               const std::string& x_label, const std::string& y_label) {
  if (curves.empty()) throw Fault("emit_plot: no curves");
  for (const auto& c : curves)
    if (c.points.empty()) throw Fault("emit_plot: empty series " + c.name);

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = std::numeric_limits<double>::infinity(), y_max = -y_min;
  for (const auto& c : curves)
    for (const auto& p : c.points) {
      x_min = std::min(x_min, p.x);
      x_max = std::max(x_max, p.x);
      y_min = std::min(y_min, p.lo);
      y_max = std::max(y_max, p.hi);
    }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const double width = 760, height = 480;
  const double ml = 70, mr = 160, mt = 20, mb = 55;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
  auto sy = [&](double y) { return mt + ph - (y - y_min) / (y_max - y_min) * ph; };

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Fault("cannot write " + out_path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes + ticks
  out << "<g stroke=\"#333\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << mt + ph << "\"/>\n</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  const double xstep = nice_step(x_max - x_min, 6);
  for (double x = std::ceil(x_min / xstep) * xstep; x <= x_max + 1e-9; x += xstep) {
    out << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << mt + ph << "\" x2=\"" << num(sx(x))
        << "\" y2=\"" << mt + ph + 4 << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << num(sx(x)) << "\" y=\"" << mt + ph + 16
        << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
  }
  const double ystep = nice_step(y_max - y_min, 6);
  for (double y = std::ceil(y_min / ystep) * ystep; y <= y_max + 1e-9; y += ystep) {
    out << "<line x1=\"" << ml - 4 << "\" y1=\"" << num(sy(y)) << "\" x2=\"" << ml
        << "\" y2=\"" << num(sy(y)) << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << num(sy(y) + 4)
        << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << mt + ph / 2 << ")\">" << y_label << "</text>\n";
  out << "</g>\n";

  for (size_t c = 0; c < curves.size(); ++c) {
    const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
    // confidence band
    out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
    for (const auto& p : curves[c].points) out << num(sx(p.x)) << ',' << num(sy(p.hi)) << ' ';
    for (auto it = curves[c].points.rbegin(); it != curves[c].points.rend(); ++it)
      out << num(sx(it->x)) << ',' << num(sy(it->lo)) << ' ';
    out << "\"/>\n";
    // mean line
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
    for (const auto& p : curves[c].points) out << num(sx(p.x)) << ',' << num(sy(p.mean)) << ' ';
    out << "\"/>\n";
    // legend entry
    const double ly = mt + 14 + 18 * static_cast<double>(c);
    out << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 34
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << ml + pw + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">" << curves[c].name
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace pgreuse
