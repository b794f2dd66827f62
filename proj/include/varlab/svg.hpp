#pragma once

#include <string>
#include <vector>

#include "varlab/linalg.hpp"

namespace varlab {

/// Minimal static SVG scatter/overlay document. Data coordinates are
/// mapped into a fixed 640x640 viewport with 10% padding; emission order
/// is the call order, so output bytes are deterministic.
class SvgPlot {
 public:
  SvgPlot(double lo_x, double lo_y, double hi_x, double hi_y);

  void scatter(const std::vector<Vec>& pts, int coord_x, int coord_y,
               const std::string& color, double radius = 2.0);
  void line(double x0, double y0, double x1, double y1,
            const std::string& color, double width = 1.5);
  void circle(double cx, double cy, double r, const std::string& color,
              double width = 1.5);
  void text(double x, double y, const std::string& label);
  void axes();

  std::string render() const;
  void write(const std::string& path) const;

 private:
  double px(double x) const;
  double py(double y) const;
  double scale() const;

  double lo_x_, lo_y_, hi_x_, hi_y_;
  std::vector<std::string> body_;
};

}  // namespace varlab
