#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nhskin/types.hpp"

namespace nhskin {

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

/// "a+bi" form, both parts shortest round-trip.
std::string format_complex(cplx value);

/// Parses "a", "bi", "a+bi", "a-bi", "i", "-i" (whitespace-free).
/// Throws InvalidArgument on anything else.
cplx parse_complex(std::string_view text);

/// Occupancy grid written as binary PGM (P5), 255 = occupied, row 0 at the top.
/// `cells` is indexed [ix * height + iy] with iy increasing upward.
void write_pgm(std::ostream& out, int width, int height, const std::vector<bool>& cells);

/// A named colored point set for SVG scatter plots.
struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  double radius = 2.0;
};

/// Minimal static scatter plot with axes box, tick labels at the data range
/// ends and a legend.
void write_svg_scatter(std::ostream& out, const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<SvgSeries>& series);

/// Heatmap of values[ix * height + iy] (iy upward), gray scale min->white, max->black.
void write_svg_heatmap(std::ostream& out, const std::string& title, int width, int height,
                       const std::vector<double>& values);

}  // namespace nhskin
