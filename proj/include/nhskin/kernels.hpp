#pragma once

#include <optional>
#include <vector>

#include "nhskin/model.hpp"
#include "nhskin/nonbloch.hpp"
#include "nhskin/topology.hpp"

/// Data-parallel kernels. Every `_parallel` function has a `_serial` twin that
/// runs the same per-item code in a plain loop; outputs are bit-identical,
/// which the tests check and the benchmark times.
namespace nhskin::kernels {

/// Band energies of H(k_j), k_j = -pi + 2 pi j / k_grid, j < k_grid. 1D only.
std::vector<CVector> band_scan_serial(const LatticeModel& model, int k_grid);
std::vector<CVector> band_scan_parallel(const LatticeModel& model, int k_grid);

/// Adaptive phase unwrapping of det[H(k)] - base (no band-gap precheck).
WindingResult winding_single(const LatticeModel& model, cplx base, double gap_tol);

std::vector<std::optional<int>> winding_grid_serial(const LatticeModel& model,
                                                    const std::vector<cplx>& bases, double gap_tol);
std::vector<std::optional<int>> winding_grid_parallel(const LatticeModel& model,
                                                      const std::vector<cplx>& bases, double gap_tol);

AmoebaRaster amoeba_raster_serial(const CharPoly& poly, const AmoebaSampling& sampling);
AmoebaRaster amoeba_raster_parallel(const CharPoly& poly, const AmoebaSampling& sampling);

/// Segment E(t) = start + t (end - start), t in [0, 1].
struct ScanLine {
  cplx start;
  cplx end;
};

/// Zeros of the GBZ modulus residual along each line; both beta roots per energy.
std::vector<GBZSample> gbz_line_scan_serial(const LatticeModel& model,
                                            const std::vector<ScanLine>& lines,
                                            const GbzScanOptions& options);
std::vector<GBZSample> gbz_line_scan_parallel(const LatticeModel& model,
                                              const std::vector<ScanLine>& lines,
                                              const GbzScanOptions& options);

/// Golden-section minimum of f on [a, b] to abscissa tolerance tol.
template <class F>
double golden_minimize(F&& f, double a, double b, double tol) {
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

}  // namespace nhskin::kernels
