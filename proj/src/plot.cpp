#include "cae/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace cae {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 50.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

void write_landscape_svg(std::ostream& out, const Landscape& landscape, const std::string& title) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t c = 0; c < landscape.energy.size(); ++c) {
    if (landscape.singular[c]) continue;
    lo = std::min(lo, landscape.energy[c]);
    hi = std::max(hi, landscape.energy[c]);
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const double gmin = landscape.grid.front();
  const double gmax = landscape.grid.back();
  const double pw = kWidth - 2 * kMargin;
  const double ph = kHeight - 2 * kMargin;
  auto sx = [&](double z) { return kMargin + (z - gmin) / (gmax - gmin) * pw; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"14\">" << escape(title) << "</text>\n";

  if (landscape.n_free == 1) {
    auto sy = [&](double e) { return kHeight - kMargin - (e - lo) / (hi - lo) * ph; };
    out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < landscape.grid.size(); ++i) {
      if (landscape.singular[i]) continue;
      out << num(sx(landscape.grid[i])) << ',' << num(sy(landscape.energy[i])) << ' ';
    }
    out << "\"/>\n";
    for (std::size_t m : landscape_local_minima(landscape))
      out << "<circle cx=\"" << num(sx(landscape.grid[m])) << "\" cy=\"" << num(sy(landscape.energy[m]))
          << "\" r=\"4\" fill=\"crimson\"/>\n";
    out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - 15 << "\" font-family=\"sans-serif\" font-size=\"12\">z: "
        << num(gmin) << " .. " << num(gmax) << "</text>\n";
  } else {
    const std::size_t n = landscape.grid.size();
    // Cap the number of drawn cells so large scans stay a reasonable size.
    const std::size_t stride = std::max<std::size_t>(1, n / 200);
    const double cell = pw / static_cast<double>((n + stride - 1) / stride);
    const double side = std::min(pw, ph);
    const double scale = side / pw;
    for (std::size_t i = 0; i < n; i += stride) {
      for (std::size_t j = 0; j < n; j += stride) {
        if (landscape.is_singular(i, j)) continue;
        const double frac = (landscape.at(i, j) - lo) / (hi - lo);
        const int g = static_cast<int>(std::lround(255.0 * std::sqrt(frac)));
        out << "<rect x=\"" << num(kMargin + static_cast<double>(j / stride) * cell * scale) << "\" y=\""
            << num(kMargin + static_cast<double>(i / stride) * cell * scale) << "\" width=\""
            << num(cell * scale + 0.05) << "\" height=\"" << num(cell * scale + 0.05) << "\" fill=\"rgb(" << g
            << ',' << g << ',' << g << ")\"/>\n";
      }
    }
    out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - 15
        << "\" font-family=\"sans-serif\" font-size=\"12\">rows z1, columns z2: " << num(gmin) << " .. "
        << num(gmax) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace cae
