#include "nhskin/topology.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "nhskin/error.hpp"
#include "nhskin/io.hpp"
#include "nhskin/kernels.hpp"

namespace nhskin {

namespace {

void require_1d(const LatticeModel& model, const char* what) {
  if (model.dimension() != 1)
    throw InvalidArgument(std::string(what) + " is only defined for one-dimensional models");
}

}  // namespace

PointGap point_gap_open(const LatticeModel& model, cplx base, int k_grid, double gap_tol) {
  require_1d(model, "point_gap_open");
  if (k_grid < 4) throw InvalidArgument("k_grid must be >= 4");
  const auto bands = kernels::band_scan_parallel(model, k_grid);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : bands)
    for (Eigen::Index b = 0; b < e.size(); ++b) best = std::min(best, std::abs(e[b] - base));
  return {best > gap_tol, best};
}

WindingResult winding_number(const LatticeModel& model, cplx base, double gap_tol) {
  require_1d(model, "winding_number");
  const auto gap = point_gap_open(model, base, 2048, gap_tol);
  if (!gap.open)
    throw GapClosedError("point gap closed at E_B = " + format_complex(base) +
                         " (distance to PBC bands " + format_double(gap.min_dist) + ")");
  return kernels::winding_single(model, base, gap_tol);
}

Side predict_skin_side(const WindingResult& w) {
  if (w.w < 0) return Side::Right;
  if (w.w > 0) return Side::Left;
  return Side::None;
}

std::vector<std::optional<int>> winding_grid(const LatticeModel& model,
                                             const std::vector<cplx>& bases, double gap_tol) {
  require_1d(model, "winding_grid");
  return kernels::winding_grid_parallel(model, bases, gap_tol);
}

void write_winding_csv(std::ostream& out, const std::vector<cplx>& bases,
                       const std::vector<std::optional<int>>& w) {
  out << "re,im,w\n";
  for (std::size_t i = 0; i < bases.size(); ++i) {
    out << format_double(bases[i].real()) << ',' << format_double(bases[i].imag()) << ',';
    if (w[i])
      out << *w[i];
    else
      out << "gap";
    out << '\n';
  }
}

}  // namespace nhskin
