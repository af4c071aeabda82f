#include "nhskin/nonbloch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "nhskin/error.hpp"
#include "nhskin/io.hpp"
#include "nhskin/kernels.hpp"
#include "nhskin/polyroots.hpp"
#include "nhskin/realspace.hpp"
#include "nhskin/spectral.hpp"

namespace nhskin {

namespace {

void require_1d(const LatticeModel& model, const char* what) {
  if (model.dimension() != 1)
    throw InvalidArgument(std::string(what) + " needs a one-dimensional model");
}

Side side_of(double modulus, double tol) {
  if (modulus < 1.0 - tol) return Side::Left;
  if (modulus > 1.0 + tol) return Side::Right;
  return Side::None;
}

}  // namespace

std::vector<cplx> beta_roots(const LatticeModel& model, cplx energy) {
  require_1d(model, "beta_roots");
  const CharPoly poly = char_poly(model, energy);
  const double biggest = poly.max_abs_coefficient();
  if (!(biggest > 0.0)) throw DegeneratePolynomialError("characteristic polynomial vanishes identically");
  if (poly.leading_magnitude() <= 1e-12 * biggest)
    throw DegeneratePolynomialError("leading coefficient of det[E - H(beta)] vanishes (beta^" +
                                    std::to_string(poly.max_exponent(0)) + "): no finite GBZ");
  if (poly.trailing_magnitude() <= 1e-12 * biggest)
    throw DegeneratePolynomialError("trailing coefficient of det[E - H(beta)] vanishes (beta^" +
                                    std::to_string(poly.min_exponent(0)) + "): no finite GBZ");
  const auto coeffs = poly.cleared();
  if (coeffs.size() < 2) throw DegeneratePolynomialError("det[E - H(beta)] does not depend on beta");
  auto roots = poly_roots(coeffs);
  sort_by_modulus(roots);
  return roots;
}

GbzMembership gbz_membership(const LatticeModel& model, cplx energy, double gbz_tol) {
  require_1d(model, "gbz_membership");
  const CharPoly poly = char_poly(model, energy);
  const int q = -poly.min_exponent(0);
  const int p = poly.max_exponent(0);
  if (q == 0 || p == 0)
    throw DegeneratePolynomialError("GBZ needs hopping in both directions (exponent range [" +
                                    std::to_string(-q) + ", " + std::to_string(p) + "])");
  const auto roots = beta_roots(model, energy);
  const cplx a = roots[q - 1], b = roots[q];
  const double residual = (std::abs(b) - std::abs(a)) / std::abs(a);
  return {residual < gbz_tol, residual, {a, b}};
}

GbzCurve gbz_curve(const LatticeModel& model, int n_seed, double refine_tol, double gbz_tol) {
  require_1d(model, "gbz_curve");
  if (n_seed < 4) throw InvalidArgument("gbz_curve needs at least 4 seed cells");
  // Fails early on one-way models instead of after the eigensolve.
  gbz_membership(model, cplx(0.0), gbz_tol);
  const CVector seeds = sorted_eigenvalues(build_chain(model, n_seed, AxisBoundary::open()).matrix());
  const int n = static_cast<int>(seeds.size());

  GbzCurve curve;
  curve.seeds = n;
  constexpr int kNeighbours = 6;
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> dist;
    dist.reserve(n);
    for (int j = 0; j < n; ++j)
      if (j != i) dist.push_back({std::abs(seeds[j] - seeds[i]), j});
    const int m = std::min<int>(kNeighbours, static_cast<int>(dist.size()));
    std::partial_sort(dist.begin(), dist.begin() + m, dist.end());
    double nn = 0.0;
    for (int k = 0; k < m && nn == 0.0; ++k) nn = dist[k].first;
    if (nn == 0.0) nn = 1e-3 * std::max(1.0, std::abs(seeds[i]));

    // Local tangent from the principal axis of the neighbourhood.
    double mx = seeds[i].real(), my = seeds[i].imag();
    for (int k = 0; k < m; ++k) {
      mx += seeds[dist[k].second].real();
      my += seeds[dist[k].second].imag();
    }
    mx /= m + 1;
    my /= m + 1;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    auto add = [&](cplx z) {
      sxx += (z.real() - mx) * (z.real() - mx);
      sxy += (z.real() - mx) * (z.imag() - my);
      syy += (z.imag() - my) * (z.imag() - my);
    };
    add(seeds[i]);
    for (int k = 0; k < m; ++k) add(seeds[dist[k].second]);
    const double angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    const cplx normal = (sxx + syy > 0.0) ? std::polar(1.0, angle) * cplx(0.0, 1.0) : cplx(0.0, 1.0);

    auto residual = [&](double s) {
      try {
        return gbz_membership(model, seeds[i] + s * normal, gbz_tol).residual;
      } catch (const DegeneratePolynomialError&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    const double reach = 5.0 * nn;
    double s = kernels::golden_minimize(residual, -reach, reach, refine_tol);
    if (residual(0.0) <= residual(s)) s = 0.0;
    const cplx e = seeds[i] + s * normal;
    GbzMembership mem;
    try {
      mem = gbz_membership(model, e, gbz_tol);
    } catch (const DegeneratePolynomialError&) {
      curve.failed_seeds.push_back(i);
      continue;
    }
    if (!mem.member) {
      curve.failed_seeds.push_back(i);
      continue;
    }
    for (cplx beta : {mem.beta_pair.first, mem.beta_pair.second})
      curve.samples.push_back({beta, e, mem.residual, side_of(std::abs(beta), gbz_tol)});
  }
  if (curve.failed_seeds.size() > 0.05 * n) {
    std::string list;
    for (std::size_t k = 0; k < curve.failed_seeds.size() && k < 20; ++k)
      list += (k ? "," : "") + std::to_string(curve.failed_seeds[k]);
    if (curve.failed_seeds.size() > 20) list += ",...";
    throw ComputationError("GBZ refinement failed on " + std::to_string(curve.failed_seeds.size()) +
                           " of " + std::to_string(n) + " seeds (indices " + list + ")");
  }
  return curve;
}

std::vector<GBZSample> gbz_energy_scan(const LatticeModel& model, const GbzScanOptions& options) {
  require_1d(model, "gbz_energy_scan");
  if (options.lines < 2 || options.samples_per_line < 3)
    throw InvalidArgument("GBZ scan needs at least 2 lines and 3 samples per line");
  const auto bands = kernels::band_scan_parallel(model, 2048);
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& e : bands)
    for (Eigen::Index b = 0; b < e.size(); ++b) {
      x0 = std::min(x0, e[b].real());
      x1 = std::max(x1, e[b].real());
      y0 = std::min(y0, e[b].imag());
      y1 = std::max(y1, e[b].imag());
    }
  const double pad = 0.05 * std::max({x1 - x0, y1 - y0, 1e-3});
  x0 -= pad;
  x1 += pad;
  y0 -= pad;
  y1 += pad;
  std::vector<kernels::ScanLine> lines;
  for (int i = 0; i < options.lines; ++i) {
    const double t = double(i) / (options.lines - 1);
    const double x = x0 + t * (x1 - x0), y = y0 + t * (y1 - y0);
    lines.push_back({cplx(x, y0), cplx(x, y1)});
    lines.push_back({cplx(x0, y), cplx(x1, y)});
  }
  return kernels::gbz_line_scan_parallel(model, lines, options);
}

Side gbz_side(const std::vector<GBZSample>& samples) {
  int left = 0, right = 0;
  for (const auto& s : samples) {
    left += s.side == Side::Left;
    right += s.side == Side::Right;
  }
  if (left > right) return Side::Left;
  if (right > left) return Side::Right;
  return Side::None;
}

void write_gbz_csv(std::ostream& out, const std::vector<GBZSample>& samples) {
  out << "re_beta,im_beta,re_e,im_e,residual\n";
  for (const auto& s : samples)
    out << format_double(s.beta.real()) << ',' << format_double(s.beta.imag()) << ','
        << format_double(s.energy.real()) << ',' << format_double(s.energy.imag()) << ','
        << format_double(s.modulus_residual) << '\n';
}

int AmoebaRaster::occupied_cells() const {
  return static_cast<int>(std::count(occupancy.begin(), occupancy.end(), true));
}

AmoebaRaster amoeba_points(const LatticeModel& model, cplx energy, const AmoebaSampling& sampling) {
  if (model.dimension() != 2) throw InvalidArgument("amoeba_points needs a two-dimensional model");
  return kernels::amoeba_raster_parallel(char_poly(model, energy), sampling);
}

bool has_hole(const AmoebaRaster& raster, int min_hole_cells) {
  const int n = raster.resolution;
  if (n <= 0 || raster.occupancy.empty()) throw InvalidArgument("has_hole on an empty raster");
  auto at = [n](int ix, int iy) { return static_cast<std::size_t>(ix) * n + iy; };
  // 0 = unvisited free, 1 = occupied, 2 = reached from the border
  std::vector<char> state(raster.occupancy.size());
  for (std::size_t k = 0; k < state.size(); ++k) state[k] = raster.occupancy[k] ? 1 : 0;
  std::vector<std::pair<int, int>> stack;
  auto fill = [&](int ix, int iy, char mark) {
    int size = 0;
    stack.push_back({ix, iy});
    state[at(ix, iy)] = mark;
    while (!stack.empty()) {
      const auto [x, y] = stack.back();
      stack.pop_back();
      ++size;
      const int nx[4] = {x + 1, x - 1, x, x};
      const int ny[4] = {y, y, y + 1, y - 1};
      for (int d = 0; d < 4; ++d) {
        if (nx[d] < 0 || ny[d] < 0 || nx[d] >= n || ny[d] >= n) continue;
        char& s = state[at(nx[d], ny[d])];
        if (s == 0) {
          s = mark;
          stack.push_back({nx[d], ny[d]});
        }
      }
    }
    return size;
  };
  for (int i = 0; i < n; ++i) {
    for (auto [x, y] : {std::pair{i, 0}, std::pair{i, n - 1}, std::pair{0, i}, std::pair{n - 1, i}})
      if (state[at(x, y)] == 0) fill(x, y, 2);
  }
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      if (state[at(ix, iy)] == 0 && fill(ix, iy, 3) >= min_hole_cells) return true;
  return false;
}

bool obc_member_2d(const LatticeModel& model, cplx energy, const AmoebaSampling& sampling,
                   int min_hole_cells) {
  return !has_hole(amoeba_points(model, energy, sampling), min_hole_cells);
}

Amoeba1D amoeba_1d(const LatticeModel& model, cplx energy, double cell_width) {
  require_1d(model, "amoeba_1d");
  const CharPoly poly = char_poly(model, energy);
  const int q = -poly.min_exponent(0);
  if (q == 0 || poly.max_exponent(0) == 0)
    throw DegeneratePolynomialError("amoeba_1d needs hopping in both directions");
  Amoeba1D out;
  for (const cplx& b : beta_roots(model, energy)) out.log_moduli.push_back(std::log(std::abs(b)));
  std::sort(out.log_moduli.begin(), out.log_moduli.end());
  out.pole_order = q;
  out.central_gap = out.log_moduli[q] - out.log_moduli[q - 1];
  out.hole = out.central_gap >= cell_width;
  return out;
}

void write_amoeba_pgm(std::ostream& out, const AmoebaRaster& raster) {
  write_pgm(out, raster.resolution, raster.resolution, raster.occupancy);
}

void write_amoeba_points_csv(std::ostream& out, const AmoebaRaster& raster) {
  out << "r_x,log_abs_beta_y\n";
  for (const auto& [x, y] : raster.points) out << format_double(x) << ',' << format_double(y) << '\n';
}

}  // namespace nhskin
