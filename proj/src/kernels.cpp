#include "nhskin/kernels.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "nhskin/error.hpp"
#include "nhskin/io.hpp"
#include "nhskin/polyroots.hpp"

namespace nhskin::kernels {

namespace {

constexpr double kPi = std::numbers::pi;

// OpenMP loop that carries exceptions out of the parallel region; the error
// of the lowest failing index is rethrown so failures are deterministic.
template <class Body>
void parallel_for(long n, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Small band matrices go through Eigen so the kernels never re-enter LAPACK
// from several threads.
CVector band_energies(const CMatrix& h) {
  if (h.rows() == 1) return h.col(0);
  Eigen::ComplexEigenSolver<CMatrix> solver(h, false);
  if (solver.info() != Eigen::Success) throw ComputationError("band eigensolve did not converge");
  return solver.eigenvalues();
}

CVector band_at(const LatticeModel& model, int j, int k_grid) {
  const double k = -kPi + 2.0 * kPi * j / k_grid;
  return band_energies(bloch(model, std::span<const double>(&k, 1)));
}

void check_band_scan(const LatticeModel& model, int k_grid) {
  if (model.dimension() != 1) throw InvalidArgument("band scan needs a 1D model");
  if (k_grid < 1) throw InvalidArgument("k_grid must be positive");
}

cplx det_minus(const LatticeModel& model, double k, cplx base) {
  const CMatrix h = bloch(model, std::span<const double>(&k, 1));
  return (h.rows() == 1 ? h(0, 0) : h.determinant()) - base;
}

std::optional<int> winding_or_gap(const LatticeModel& model, const std::vector<CVector>& bands,
                                  cplx base, double gap_tol) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : bands)
    for (Eigen::Index b = 0; b < e.size(); ++b) best = std::min(best, std::abs(e[b] - base));
  if (!(best > gap_tol)) return std::nullopt;
  try {
    return winding_single(model, base, gap_tol).w;
  } catch (const GapClosedError&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<CVector> band_scan_serial(const LatticeModel& model, int k_grid) {
  check_band_scan(model, k_grid);
  std::vector<CVector> out(k_grid);
  for (int j = 0; j < k_grid; ++j) out[j] = band_at(model, j, k_grid);
  return out;
}

std::vector<CVector> band_scan_parallel(const LatticeModel& model, int k_grid) {
  check_band_scan(model, k_grid);
  std::vector<CVector> out(k_grid);
  parallel_for(k_grid, [&](long j) { out[j] = band_at(model, static_cast<int>(j), k_grid); });
  return out;
}

WindingResult winding_single(const LatticeModel& model, cplx base, double gap_tol) {
  if (model.dimension() != 1) throw InvalidArgument("winding needs a 1D model");
  constexpr int kInitialGrid = 64;
  constexpr int kMaxDepth = 40;
  int samples = 0;
  auto eval = [&](double k) {
    ++samples;
    const cplx f = det_minus(model, k, base);
    if (!(std::abs(f) > gap_tol))
      throw GapClosedError("det[H(k)] - E_B vanishes at k = " + format_double(k) +
                           " for E_B = " + format_complex(base));
    return f;
  };
  cplx total(0.0);
  // Explicit stack of (k1, f1, k2, f2, depth) so deep refinement cannot overflow.
  struct Segment {
    double k1;
    cplx f1;
    double k2;
    cplx f2;
    int depth;
  };
  std::vector<Segment> stack;
  cplx f_prev = eval(-kPi);
  for (int j = 1; j <= kInitialGrid; ++j) {
    const double k_prev = -kPi + 2.0 * kPi * (j - 1) / kInitialGrid;
    const double k = -kPi + 2.0 * kPi * j / kInitialGrid;
    const cplx f = eval(k);
    stack.push_back({k_prev, f_prev, k, f, 0});
    while (!stack.empty()) {
      const Segment s = stack.back();
      stack.pop_back();
      const cplx ratio = s.f2 / s.f1;
      if (std::abs(std::arg(ratio)) < kPi / 2) {
        total += std::log(ratio);
        continue;
      }
      if (s.depth >= kMaxDepth)
        throw GapClosedError("phase of det[H(k)] - E_B does not resolve near k = " +
                             format_double(s.k1));
      const double km = 0.5 * (s.k1 + s.k2);
      const cplx fm = eval(km);
      // Right half pushed first so the left half is integrated first.
      stack.push_back({km, fm, s.k2, s.f2, s.depth + 1});
      stack.push_back({s.k1, s.f1, km, fm, s.depth + 1});
    }
    f_prev = f;
  }
  const cplx raw = total / cplx(0.0, 2.0 * kPi);
  const int w = static_cast<int>(std::lround(raw.real()));
  if (std::abs(raw - cplx(w)) >= 1e-4)
    throw ComputationError("winding integral " + format_complex(raw) + " is not near an integer");
  return {w, base, raw, samples};
}

std::vector<std::optional<int>> winding_grid_serial(const LatticeModel& model,
                                                    const std::vector<cplx>& bases, double gap_tol) {
  const auto bands = band_scan_serial(model, 2048);
  std::vector<std::optional<int>> out(bases.size());
  for (std::size_t i = 0; i < bases.size(); ++i) out[i] = winding_or_gap(model, bands, bases[i], gap_tol);
  return out;
}

std::vector<std::optional<int>> winding_grid_parallel(const LatticeModel& model,
                                                      const std::vector<cplx>& bases,
                                                      double gap_tol) {
  const auto bands = band_scan_parallel(model, 2048);
  std::vector<std::optional<int>> out(bases.size());
  const long n = static_cast<long>(bases.size());
  parallel_for(n, [&](long i) { out[i] = winding_or_gap(model, bands, bases[i], gap_tol); });
  return out;
}

namespace {

struct AmoebaGeometry {
  AmoebaWindow window;
  int resolution;
  int rx_samples;
  int phases;
  int branches;
  double dx, dy;
};

AmoebaGeometry amoeba_geometry(const CharPoly& poly, const AmoebaSampling& s) {
  if (poly.variables() != 2) throw InvalidArgument("amoeba needs a two-variable polynomial");
  if (s.resolution < 3) throw InvalidArgument("amoeba resolution must be >= 3");
  if (s.phase_samples < 3) throw InvalidArgument("amoeba needs at least 3 phase samples");
  const auto& w = s.window;
  if (!(w.rx_max > w.rx_min) || !(w.ry_max > w.ry_min)) throw InvalidArgument("empty amoeba window");
  AmoebaGeometry g;
  g.window = w;
  g.resolution = s.resolution;
  g.rx_samples = s.r_x_samples > 0 ? s.r_x_samples : s.resolution;
  g.phases = s.phase_samples;
  g.branches = poly.max_exponent(1) - poly.min_exponent(1);
  if (g.branches < 1) throw DegeneratePolynomialError("characteristic polynomial does not depend on beta_y");
  g.dx = (w.rx_max - w.rx_min) / s.resolution;
  g.dy = (w.ry_max - w.ry_min) / s.resolution;
  return g;
}

// Everything one r_x sample contributes to the raster.
struct AmoebaColumn {
  int ix = -1;
  std::vector<std::vector<bool>> branch_cells;  // [branch][iy]
  std::vector<int> counts;                      // [iy]
  std::vector<std::pair<double, double>> points;
  int failed = 0;
};

double clamp_cell(double v) { return std::clamp(v, -1e9, 1e9); }

AmoebaColumn amoeba_column(const CharPoly& poly, const AmoebaGeometry& g, int sample, bool keep_points) {
  AmoebaColumn col;
  const double r = g.window.rx_min + (sample + 0.5) * (g.window.rx_max - g.window.rx_min) / g.rx_samples;
  col.ix = static_cast<int>(std::floor((r - g.window.rx_min) / g.dx));
  col.ix = std::clamp(col.ix, 0, g.resolution - 1);
  col.branch_cells.assign(g.branches, std::vector<bool>(g.resolution, false));
  col.counts.assign(g.resolution, 0);
  // log|beta_y| per phase and branch; NaN marks a failed sample.
  std::vector<std::vector<double>> logs(g.phases, std::vector<double>(g.branches, std::nan("")));
  std::vector<char> valid(g.phases, 0);
  for (int j = 0; j < g.phases; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / g.phases;
    const std::vector<cplx> c = poly.cleared_in_y(std::exp(cplx(r, phi)));
    double biggest = 0.0;
    for (const auto& v : c) biggest = std::max(biggest, std::abs(v));
    if (!(biggest > 0.0) || std::abs(c.back()) <= 1e-12 * biggest ||
        std::abs(c.front()) <= 1e-12 * biggest) {
      ++col.failed;
      continue;
    }
    std::vector<cplx> roots;
    try {
      roots = poly_roots(c);
    } catch (const ComputationError&) {
      ++col.failed;
      continue;
    }
    sort_by_modulus(roots);
    valid[j] = 1;
    for (int a = 0; a < g.branches; ++a) logs[j][a] = std::log(std::abs(roots[a]));
  }
  auto cell = [&](double y) { return clamp_cell(std::floor((y - g.window.ry_min) / g.dy)); };
  for (int a = 0; a < g.branches; ++a) {
    auto& cells = col.branch_cells[a];
    for (int j = 0; j < g.phases; ++j) {
      if (!valid[j]) continue;
      const double y = logs[j][a];
      const double c0 = cell(y);
      if (c0 >= 0 && c0 < g.resolution) {
        cells[static_cast<int>(c0)] = true;
        ++col.counts[static_cast<int>(c0)];
      }
      if (keep_points) col.points.emplace_back(r, y);
      const int jn = (j + 1) % g.phases;
      if (!valid[jn]) continue;
      const double c1 = cell(logs[jn][a]);
      const double lo = std::max(0.0, std::min(c0, c1));
      const double hi = std::min(g.resolution - 1.0, std::max(c0, c1));
      for (int iy = static_cast<int>(lo); iy <= static_cast<int>(hi) && lo <= hi; ++iy) cells[iy] = true;
    }
  }
  return col;
}

AmoebaRaster merge_columns(const AmoebaGeometry& g, std::vector<AmoebaColumn>& columns,
                           const AmoebaSampling& s) {
  AmoebaRaster raster;
  raster.window = g.window;
  raster.resolution = g.resolution;
  const std::size_t cells = static_cast<std::size_t>(g.resolution) * g.resolution;
  raster.occupancy.assign(cells, false);
  raster.counts.assign(cells, 0);
  raster.branches.assign(g.branches, std::vector<bool>(cells, false));
  for (auto& col : columns) {
    const std::size_t base = static_cast<std::size_t>(col.ix) * g.resolution;
    for (int a = 0; a < g.branches; ++a)
      for (int iy = 0; iy < g.resolution; ++iy)
        if (col.branch_cells[a][iy]) {
          raster.branches[a][base + iy] = true;
          raster.occupancy[base + iy] = true;
        }
    for (int iy = 0; iy < g.resolution; ++iy) raster.counts[base + iy] += col.counts[iy];
    raster.failed_samples += col.failed;
    raster.points.insert(raster.points.end(), col.points.begin(), col.points.end());
  }
  raster.samples = g.rx_samples * g.phases;
  if (raster.failed_samples > s.max_failure_fraction * raster.samples)
    throw ComputationError("amoeba root finding failed on " + std::to_string(raster.failed_samples) +
                           " of " + std::to_string(raster.samples) + " samples");
  return raster;
}

}  // namespace

AmoebaRaster amoeba_raster_serial(const CharPoly& poly, const AmoebaSampling& sampling) {
  const auto g = amoeba_geometry(poly, sampling);
  std::vector<AmoebaColumn> columns(g.rx_samples);
  for (int i = 0; i < g.rx_samples; ++i) columns[i] = amoeba_column(poly, g, i, sampling.keep_points);
  return merge_columns(g, columns, sampling);
}

AmoebaRaster amoeba_raster_parallel(const CharPoly& poly, const AmoebaSampling& sampling) {
  const auto g = amoeba_geometry(poly, sampling);
  std::vector<AmoebaColumn> columns(g.rx_samples);
  parallel_for(g.rx_samples, [&](long i) {
    columns[i] = amoeba_column(poly, g, static_cast<int>(i), sampling.keep_points);
  });
  return merge_columns(g, columns, sampling);
}

namespace {

double scan_residual(const LatticeModel& model, cplx e, double gbz_tol) {
  try {
    return gbz_membership(model, e, gbz_tol).residual;
  } catch (const DegeneratePolynomialError&) {
    return std::numeric_limits<double>::infinity();
  }
}

std::vector<GBZSample> scan_line(const LatticeModel& model, const ScanLine& line,
                                 const GbzScanOptions& o) {
  const int m = o.samples_per_line;
  const cplx dir = line.end - line.start;
  const double length = std::abs(dir);
  std::vector<double> r(m);
  for (int i = 0; i < m; ++i) r[i] = scan_residual(model, line.start + dir * (double(i) / (m - 1)), o.gbz_tol);
  std::vector<GBZSample> out;
  for (int i = 0; i < m; ++i) {
    const double left = i > 0 ? r[i - 1] : std::numeric_limits<double>::infinity();
    const double right = i + 1 < m ? r[i + 1] : std::numeric_limits<double>::infinity();
    if (!(r[i] < left && r[i] <= right)) continue;
    const double a = std::max(0.0, (i - 1.0) / (m - 1)), b = std::min(1.0, (i + 1.0) / (m - 1));
    auto f = [&](double t) { return scan_residual(model, line.start + dir * t, o.gbz_tol); };
    const double tol = length > 0 ? o.refine_tol / length : o.refine_tol;
    double t = golden_minimize(f, a, b, tol);
    if (f(t) > r[i]) t = double(i) / (m - 1);
    const cplx e = line.start + dir * t;
    const auto mem = gbz_membership(model, e, o.gbz_tol);
    if (!mem.member) continue;
    for (cplx beta : {mem.beta_pair.first, mem.beta_pair.second}) {
      const double mod = std::abs(beta);
      const Side side = mod < 1.0 - o.gbz_tol ? Side::Left : (mod > 1.0 + o.gbz_tol ? Side::Right : Side::None);
      out.push_back({beta, e, mem.residual, side});
    }
  }
  return out;
}

}  // namespace

std::vector<GBZSample> gbz_line_scan_serial(const LatticeModel& model,
                                            const std::vector<ScanLine>& lines,
                                            const GbzScanOptions& options) {
  std::vector<std::vector<GBZSample>> per_line(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) per_line[i] = scan_line(model, lines[i], options);
  std::vector<GBZSample> out;
  for (auto& v : per_line) out.insert(out.end(), v.begin(), v.end());
  return out;
}

std::vector<GBZSample> gbz_line_scan_parallel(const LatticeModel& model,
                                              const std::vector<ScanLine>& lines,
                                              const GbzScanOptions& options) {
  std::vector<std::vector<GBZSample>> per_line(lines.size());
  const long n = static_cast<long>(lines.size());
  parallel_for(n, [&](long i) { per_line[i] = scan_line(model, lines[i], options); });
  std::vector<GBZSample> out;
  for (auto& v : per_line) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace nhskin::kernels
