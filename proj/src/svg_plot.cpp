#include "sonartda/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace sonartda {

namespace {

constexpr int kSize = 480;
constexpr int kMargin = 48;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void svg_header(std::ofstream& f) {
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize
    << "\" height=\"" << kSize << "\" viewBox=\"0 0 " << kSize << ' ' << kSize
    << "\">\n";
  f << "<rect width=\"" << kSize << "\" height=\"" << kSize
    << "\" fill=\"white\"/>\n";
}

}  // namespace

void write_diagram_svg(const PersistenceDiagram& diag,
                       const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ComputeError("cannot open for writing: " + path);

  double max_val = 0.0;
  for (const Feature& ft : diag.features) {
    max_val = std::max(max_val, ft.birth);
    if (std::isfinite(ft.death)) max_val = std::max(max_val, ft.death);
  }
  if (std::isfinite(diag.truncation_eps))
    max_val = std::max(max_val, diag.truncation_eps);
  if (max_val <= 0.0) max_val = 1.0;
  max_val *= 1.05;

  const double span = kSize - 2.0 * kMargin;
  const auto sx = [&](double v) { return kMargin + span * v / max_val; };
  const auto sy = [&](double v) { return kSize - kMargin - span * v / max_val; };

  svg_header(f);
  f << "<line x1=\"" << kMargin << "\" y1=\"" << kSize - kMargin << "\" x2=\""
    << kSize - kMargin << "\" y2=\"" << kSize - kMargin
    << "\" stroke=\"black\"/>\n";
  f << "<line x1=\"" << kMargin << "\" y1=\"" << kSize - kMargin << "\" x2=\""
    << kMargin << "\" y2=\"" << kMargin << "\" stroke=\"black\"/>\n";
  f << "<line x1=\"" << fmt(sx(0)) << "\" y1=\"" << fmt(sy(0)) << "\" x2=\""
    << fmt(sx(max_val)) << "\" y2=\"" << fmt(sy(max_val))
    << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  f << "<text x=\"" << kSize - kMargin << "\" y=\"" << kSize - kMargin / 3
    << "\" text-anchor=\"end\" font-size=\"12\">birth (max "
    << fmt(max_val / 1.05) << ")</text>\n";
  f << "<text x=\"12\" y=\"" << kMargin
    << "\" font-size=\"12\">death</text>\n";

  const char* colors[3] = {"black", "#cc2222", "#2244cc"};
  for (const Feature& ft : diag.features) {
    const char* color = colors[ft.dim];
    if (std::isfinite(ft.death)) {
      f << "<circle cx=\"" << fmt(sx(ft.birth)) << "\" cy=\""
        << fmt(sy(ft.death)) << "\" r=\"3.5\" fill=\"" << color
        << "\" fill-opacity=\"0.75\"/>\n";
    } else {
      // Open marker pinned to the top edge for classes with no death below
      // the truncation scale.
      f << "<circle cx=\"" << fmt(sx(ft.birth)) << "\" cy=\"" << kMargin / 2
        << "\" r=\"4\" fill=\"none\" stroke=\"" << color << "\"/>\n";
    }
  }
  f << "</svg>\n";
}

void write_cloud_svg(const PointCloud& cloud, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ComputeError("cannot open for writing: " + path);
  if (cloud.size() == 0 || cloud.ambient_dim() < 1)
    throw ValidationError("cannot plot an empty cloud");

  const int n = cloud.size();
  const bool two_d = cloud.ambient_dim() >= 2;
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  for (int i = 0; i < n; ++i) {
    const double x = cloud.point(i)[0];
    const double y = two_d ? cloud.point(i)[1] : 0.0;
    if (i == 0) {
      min_x = max_x = x;
      min_y = max_y = y;
    }
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  const double span_x = std::max(max_x - min_x, 1e-12);
  const double span_y = std::max(max_y - min_y, 1e-12);
  const double span = kSize - 2.0 * kMargin;
  const auto sx = [&](double v) { return kMargin + span * (v - min_x) / span_x; };
  const auto sy = [&](double v) {
    return kSize - kMargin - span * (v - min_y) / span_y;
  };

  svg_header(f);
  f << "<polyline fill=\"none\" stroke=\"#2244cc\" stroke-width=\"1\" "
       "points=\"";
  for (int i = 0; i <= n; ++i) {
    const int g = i % n;
    const double x = cloud.point(g)[0];
    const double y = two_d ? cloud.point(g)[1] : 0.0;
    f << fmt(sx(x)) << ',' << fmt(sy(y)) << ' ';
  }
  f << "\"/>\n";
  f << "<text x=\"" << kSize - kMargin << "\" y=\"" << kSize - kMargin / 3
    << "\" text-anchor=\"end\" font-size=\"12\">pc1</text>\n";
  f << "<text x=\"12\" y=\"" << kMargin << "\" font-size=\"12\">pc2</text>\n";
  f << "</svg>\n";
}

}  // namespace sonartda
