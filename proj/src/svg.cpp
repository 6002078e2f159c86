#include "curvatura/svg.hpp"

#include <cstdio>
#include <sstream>

namespace curvatura {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

SvgCanvas::SvgCanvas(double width, double height)
    : width_(width), height_(height) {}

void SvgCanvas::touch(const Eigen::Vector2d& p) {
  if (!touched_) {
    min_x_ = max_x_ = p[0];
    min_y_ = max_y_ = p[1];
    touched_ = true;
    return;
  }
  min_x_ = std::min(min_x_, p[0]);
  max_x_ = std::max(max_x_, p[0]);
  min_y_ = std::min(min_y_, p[1]);
  max_y_ = std::max(max_y_, p[1]);
}

void SvgCanvas::polyline(const std::vector<Eigen::Vector2d>& points,
                         const std::string& color, double stroke_width) {
  if (points.size() < 2) return;
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
     << fmt(stroke_width) << "\" vector-effect=\"non-scaling-stroke\" points=\"";
  for (const auto& p : points) {
    os << fmt(p[0]) << ',' << fmt(-p[1]) << ' ';  // y up
    touch(p);
  }
  os << "\"/>";
  elements_.push_back(os.str());
}

void SvgCanvas::dot(const Eigen::Vector2d& p, const std::string& color,
                    double radius) {
  std::ostringstream os;
  os << "<circle cx=\"" << fmt(p[0]) << "\" cy=\"" << fmt(-p[1]) << "\" r=\""
     << fmt(radius) << "\" fill=\"" << color << "\"/>";
  elements_.push_back(os.str());
  touch(p);
}

void SvgCanvas::label(const Eigen::Vector2d& p, const std::string& text,
                      const std::string& color) {
  std::ostringstream os;
  os << "<text x=\"" << fmt(p[0]) << "\" y=\"" << fmt(-p[1])
     << "\" font-size=\"0.15\" fill=\"" << color << "\">" << text << "</text>";
  elements_.push_back(os.str());
  touch(p);
}

void SvgCanvas::cell(double x0, double y0, double x1, double y1,
                     const std::string& color) {
  std::ostringstream os;
  os << "<rect x=\"" << fmt(std::min(x0, x1)) << "\" y=\""
     << fmt(std::min(-y0, -y1)) << "\" width=\"" << fmt(std::abs(x1 - x0))
     << "\" height=\"" << fmt(std::abs(y1 - y0)) << "\" fill=\"" << color
     << "\"/>";
  elements_.push_back(os.str());
  touch(Eigen::Vector2d(x0, y0));
  touch(Eigen::Vector2d(x1, y1));
}

std::string SvgCanvas::str() const {
  const double pad_x = 0.05 * std::max(1e-9, max_x_ - min_x_);
  const double pad_y = 0.05 * std::max(1e-9, max_y_ - min_y_);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_)
     << "\" height=\"" << fmt(height_) << "\" viewBox=\""
     << fmt(min_x_ - pad_x) << ' ' << fmt(-max_y_ - pad_y) << ' '
     << fmt(max_x_ - min_x_ + 2 * pad_x) << ' '
     << fmt(max_y_ - min_y_ + 2 * pad_y) << "\">\n";
  for (const auto& e : elements_) os << e << '\n';
  os << "</svg>\n";
  return os.str();
}

std::string class_color(const std::string& label) {
  if (label == "Elliptic" || label == "PseudoElliptic") return "#1f77b4";
  if (label == "Hyperbolic" || label == "PseudoHyperbolic") return "#d62728";
  if (label == "Parabolic" || label == "PseudoParabolic") return "#9467bd";
  if (label == "FlatElliptic") return "#17becf";
  if (label == "FlatHyperbolic") return "#ff7f0e";
  if (label == "FlatParabolic") return "#8c564b";
  if (label == "Semiumbilic") return "#2ca02c";
  if (label == "InflectionReal") return "#bcbd22";
  if (label == "InflectionImaginary") return "#e377c2";
  if (label == "InflectionFlat") return "#7f7f7f";
  if (label == "Umbilic") return "#aec7e8";
  if (label == "FlatUmbilic") return "#c5b0d5";
  return "#000000";
}

}  // namespace curvatura
