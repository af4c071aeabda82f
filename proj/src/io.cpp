#include "nhskin/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "nhskin/error.hpp"

namespace nhskin {

std::string format_double(double value) {
  if (value == 0.0) return "0";  // folds -0 so outputs do not depend on signed zeros
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_complex(cplx value) {
  std::string im = format_double(value.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return format_double(value.real()) + im + "i";
}

namespace {

double parse_real(std::string_view text, std::string_view whole) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || first == last)
    throw InvalidArgument("cannot parse complex number '" + std::string(whole) + "'");
  return v;
}

// Imaginary part text without the trailing 'i': "", "+", "-" mean +-1.
double parse_imag(std::string_view text, std::string_view whole) {
  if (text.empty() || text == "+") return 1.0;
  if (text == "-") return -1.0;
  return parse_real(text, whole);
}

}  // namespace

cplx parse_complex(std::string_view text) {
  if (text.empty()) throw InvalidArgument("empty complex number");
  if (text.back() != 'i') return {parse_real(text, text), 0.0};
  const std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not the leading one and not an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  if (split == std::string_view::npos) return {0.0, parse_imag(body, text)};
  return {parse_real(body.substr(0, split), text), parse_imag(body.substr(split), text)};
}

void write_pgm(std::ostream& out, int width, int height, const std::vector<bool>& cells) {
  if (static_cast<long>(cells.size()) != static_cast<long>(width) * height)
    throw InvalidArgument("PGM cell count does not match dimensions");
  out << "P5\n" << width << ' ' << height << "\n255\n";
  std::string row(width, '\0');
  for (int iy = height - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < width; ++ix)
      row[ix] = cells[static_cast<std::size_t>(ix) * height + iy] ? static_cast<char>(255) : '\0';
    out.write(row.data(), width);
  }
}

namespace {

constexpr double kPlot = 480.0;
constexpr double kMargin = 60.0;

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

void svg_open(std::ostream& out, const std::string& title) {
  const double size = kPlot + 2 * kMargin;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(size + 120) << "\" height=\""
      << fixed(size) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fixed(kMargin) << "\" y=\"30\" font-family=\"sans-serif\" font-size=\"16\">"
      << escape_xml(title) << "</text>\n";
  out << "<rect x=\"" << fixed(kMargin) << "\" y=\"" << fixed(kMargin) << "\" width=\""
      << fixed(kPlot) << "\" height=\"" << fixed(kPlot)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
}

}  // namespace

void write_svg_scatter(std::ostream& out, const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<SvgSeries>& series) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw InvalidArgument("SVG series x/y length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) xmin = ymin = -1.0, xmax = ymax = 1.0;
  // Pad degenerate ranges (e.g. a purely real spectrum) so points stay visible.
  auto pad = [](double& lo, double& hi) {
    const double span = hi - lo;
    const double p = span > 0 ? 0.05 * span : std::max(1.0, std::abs(lo)) * 0.5;
    lo -= p;
    hi += p;
  };
  pad(xmin, xmax);
  pad(ymin, ymax);
  auto px = [&](double x) { return kMargin + (x - xmin) / (xmax - xmin) * kPlot; };
  auto py = [&](double y) { return kMargin + kPlot - (y - ymin) / (ymax - ymin) * kPlot; };

  svg_open(out, title);
  const std::string font = "font-family=\"sans-serif\" font-size=\"12\"";
  const double bottom = kMargin + kPlot;
  out << "<text x=\"" << fixed(kMargin + kPlot / 2) << "\" y=\"" << fixed(bottom + 40) << "\" "
      << font << " text-anchor=\"middle\">" << escape_xml(x_label) << "</text>\n";
  out << "<text x=\"15\" y=\"" << fixed(kMargin + kPlot / 2) << "\" " << font
      << " text-anchor=\"middle\" transform=\"rotate(-90 15 " << fixed(kMargin + kPlot / 2)
      << ")\">" << escape_xml(y_label) << "</text>\n";
  out << "<text x=\"" << fixed(kMargin) << "\" y=\"" << fixed(bottom + 18) << "\" " << font
      << ">" << format_double(xmin) << "</text>\n";
  out << "<text x=\"" << fixed(kMargin + kPlot) << "\" y=\"" << fixed(bottom + 18) << "\" "
      << font << " text-anchor=\"end\">" << format_double(xmax) << "</text>\n";
  out << "<text x=\"" << fixed(kMargin - 4) << "\" y=\"" << fixed(bottom) << "\" " << font
      << " text-anchor=\"end\">" << format_double(ymin) << "</text>\n";
  out << "<text x=\"" << fixed(kMargin - 4) << "\" y=\"" << fixed(kMargin + 10) << "\" " << font
      << " text-anchor=\"end\">" << format_double(ymax) << "</text>\n";
  double legend_y = kMargin + 10;
  for (const auto& s : series) {
    out << "<g fill=\"" << s.color << "\">\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << "<circle cx=\"" << fixed(px(s.x[i])) << "\" cy=\"" << fixed(py(s.y[i])) << "\" r=\""
          << fixed(s.radius) << "\"/>\n";
    out << "</g>\n";
    out << "<circle cx=\"" << fixed(kMargin + kPlot + 15) << "\" cy=\"" << fixed(legend_y - 4)
        << "\" r=\"4\" fill=\"" << s.color << "\"/>\n";
    out << "<text x=\"" << fixed(kMargin + kPlot + 25) << "\" y=\"" << fixed(legend_y) << "\" "
        << font << ">" << escape_xml(s.label) << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
}

void write_svg_heatmap(std::ostream& out, const std::string& title, int width, int height,
                       const std::vector<double>& values) {
  if (static_cast<long>(values.size()) != static_cast<long>(width) * height)
    throw InvalidArgument("heatmap value count does not match dimensions");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  const double cw = kPlot / width, ch = kPlot / height;
  svg_open(out, title);
  for (int ix = 0; ix < width; ++ix) {
    for (int iy = 0; iy < height; ++iy) {
      const double v = values[static_cast<std::size_t>(ix) * height + iy];
      if (v <= lo) continue;  // background stays white
      const int gray = static_cast<int>(std::lround(255.0 * (1.0 - (v - lo) / span)));
      out << "<rect x=\"" << fixed(kMargin + ix * cw) << "\" y=\""
          << fixed(kMargin + kPlot - (iy + 1) * ch) << "\" width=\"" << fixed(cw) << "\" height=\""
          << fixed(ch) << "\" fill=\"rgb(" << gray << ',' << gray << ',' << gray << ")\"/>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace nhskin
