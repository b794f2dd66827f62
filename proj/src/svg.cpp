#include "varlab/svg.hpp"

#include <cmath>
#include <fstream>

#include "varlab/errors.hpp"
#include "varlab/numfmt.hpp"

namespace varlab {

namespace {
constexpr double kSize = 640.0;
constexpr double kPad = 48.0;
}  // namespace

SvgPlot::SvgPlot(double lo_x, double lo_y, double hi_x, double hi_y)
    : lo_x_(lo_x), lo_y_(lo_y), hi_x_(hi_x), hi_y_(hi_y) {
  if (!(hi_x_ > lo_x_)) hi_x_ = lo_x_ + 1.0;
  if (!(hi_y_ > lo_y_)) hi_y_ = lo_y_ + 1.0;
}

double SvgPlot::scale() const {
  double sx = (kSize - 2 * kPad) / (hi_x_ - lo_x_);
  double sy = (kSize - 2 * kPad) / (hi_y_ - lo_y_);
  return std::min(sx, sy);
}

double SvgPlot::px(double x) const { return kPad + (x - lo_x_) * scale(); }
double SvgPlot::py(double y) const { return kSize - kPad - (y - lo_y_) * scale(); }

void SvgPlot::scatter(const std::vector<Vec>& pts, int coord_x, int coord_y,
                      const std::string& color, double radius) {
  for (const Vec& p : pts)
    body_.push_back("<circle cx=\"" + fmt_short(px(p[coord_x])) + "\" cy=\"" +
                    fmt_short(py(p[coord_y])) + "\" r=\"" + fmt_short(radius) +
                    "\" fill=\"" + color + "\"/>");
}

void SvgPlot::line(double x0, double y0, double x1, double y1,
                   const std::string& color, double width) {
  body_.push_back("<line x1=\"" + fmt_short(px(x0)) + "\" y1=\"" +
                  fmt_short(py(y0)) + "\" x2=\"" + fmt_short(px(x1)) +
                  "\" y2=\"" + fmt_short(py(y1)) + "\" stroke=\"" + color +
                  "\" stroke-width=\"" + fmt_short(width) + "\"/>");
}

void SvgPlot::circle(double cx, double cy, double r, const std::string& color,
                     double width) {
  body_.push_back("<circle cx=\"" + fmt_short(px(cx)) + "\" cy=\"" +
                  fmt_short(py(cy)) + "\" r=\"" + fmt_short(r * scale()) +
                  "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
                  fmt_short(width) + "\"/>");
}

void SvgPlot::text(double x, double y, const std::string& label) {
  body_.push_back("<text x=\"" + fmt_short(px(x)) + "\" y=\"" +
                  fmt_short(py(y)) + "\" font-size=\"12\" fill=\"#333\">" +
                  label + "</text>");
}

void SvgPlot::axes() {
  // frame plus min/max tick labels on both axes
  body_.push_back("<rect x=\"" + fmt_short(kPad) + "\" y=\"" + fmt_short(kPad) +
                  "\" width=\"" + fmt_short(kSize - 2 * kPad) + "\" height=\"" +
                  fmt_short(kSize - 2 * kPad) +
                  "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\"/>");
  body_.push_back("<text x=\"" + fmt_short(kPad) + "\" y=\"" +
                  fmt_short(kSize - kPad + 16) + "\" font-size=\"11\" fill=\"#333\">" +
                  fmt_short(lo_x_) + "</text>");
  body_.push_back("<text x=\"" + fmt_short(kSize - kPad - 24) + "\" y=\"" +
                  fmt_short(kSize - kPad + 16) + "\" font-size=\"11\" fill=\"#333\">" +
                  fmt_short(hi_x_) + "</text>");
  body_.push_back("<text x=\"" + fmt_short(kPad - 40) + "\" y=\"" +
                  fmt_short(kSize - kPad) + "\" font-size=\"11\" fill=\"#333\">" +
                  fmt_short(lo_y_) + "</text>");
  body_.push_back("<text x=\"" + fmt_short(kPad - 40) + "\" y=\"" +
                  fmt_short(kPad + 10) + "\" font-size=\"11\" fill=\"#333\">" +
                  fmt_short(hi_y_) + "</text>");
}

std::string SvgPlot::render() const {
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
      "viewBox=\"0 0 640 640\">\n";
  out += "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
  for (const std::string& el : body_) out += el + "\n";
  out += "</svg>\n";
  return out;
}

void SvgPlot::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io_error, "cannot open " + path);
  out << render();
}

}  // namespace varlab
