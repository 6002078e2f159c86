#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace curvatura {

/// Minimal deterministic SVG assembly for curve overlays and strata rasters.
/// A convenience view only; CSV/JSON are the contract.
class SvgCanvas {
public:
  SvgCanvas(double width = 640, double height = 640);

  void polyline(const std::vector<Eigen::Vector2d>& points,
                const std::string& color, double stroke_width = 1.5);
  void dot(const Eigen::Vector2d& p, const std::string& color,
           double radius = 3.0);
  void label(const Eigen::Vector2d& p, const std::string& text,
             const std::string& color);
  void cell(double x0, double y0, double x1, double y1,
            const std::string& color);

  /// Finalizes with a viewBox fitted to everything drawn.
  std::string str() const;

private:
  void touch(const Eigen::Vector2d& p);

  double width_, height_;
  double min_x_ = 0, min_y_ = 0, max_x_ = 1, max_y_ = 1;
  bool touched_ = false;
  std::vector<std::string> elements_;
};

/// Stable class -> color table for strata rasters.
std::string class_color(const std::string& label);

}  // namespace curvatura
