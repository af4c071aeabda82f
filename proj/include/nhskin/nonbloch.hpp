#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "nhskin/model.hpp"
#include "nhskin/types.hpp"

namespace nhskin {

constexpr double kDefaultGbzTol = 1e-6;

/// Roots of beta^q det[E - H(beta)], ascending by modulus (ties by argument).
/// Throws DegeneratePolynomialError when the leading or trailing coefficient
/// is at most 1e-12 of the largest, e.g. for one-way hopping.
std::vector<cplx> beta_roots(const LatticeModel& model, cplx energy);

struct GbzMembership {
  bool member;
  double residual;  // (|beta_{q+1}| - |beta_q|) / |beta_q|
  std::pair<cplx, cplx> beta_pair;
};

/// Non-Bloch criterion |beta_q| = |beta_{q+1}| with q the pole order.
GbzMembership gbz_membership(const LatticeModel& model, cplx energy,
                             double gbz_tol = kDefaultGbzTol);

/// One point of the generalized Brillouin zone.
struct GBZSample {
  cplx beta;
  cplx energy;
  double modulus_residual;
  Side side;  // |beta| < 1: Left, > 1: Right, on the unit circle: None (Bloch point)
};

struct GbzCurve {
  std::vector<GBZSample> samples;  // two per refined energy
  std::vector<int> failed_seeds;
  int seeds = 0;
};

/// Seeds the curve with the OBC spectrum of n_seed cells and moves each seed
/// along the local normal of the finite-size spectral curve onto the
/// zero of the modulus residual. Throws ComputationError naming the failed
/// seeds when more than 5% do not reach gbz_tol.
GbzCurve gbz_curve(const LatticeModel& model, int n_seed = 400, double refine_tol = 1e-8,
                   double gbz_tol = kDefaultGbzTol);

struct GbzScanOptions {
  int lines = 201;             // per direction
  int samples_per_line = 801;
  double gbz_tol = kDefaultGbzTol;
  double refine_tol = 1e-10;
};

/// Energies satisfying the GBZ criterion, found by scanning horizontal and
/// vertical lines across the PBC spectral box for zeros of the modulus residual.
/// Independent of any finite-size eigensolve.
std::vector<GBZSample> gbz_energy_scan(const LatticeModel& model, const GbzScanOptions& options = {});

/// Majority side over samples that are not Bloch points.
Side gbz_side(const std::vector<GBZSample>& samples);

/// CSV "re_beta,im_beta,re_e,im_e,residual".
void write_gbz_csv(std::ostream& out, const std::vector<GBZSample>& samples);

struct AmoebaWindow {
  double rx_min = -3.0, rx_max = 3.0;
  double ry_min = -3.0, ry_max = 3.0;
};

struct AmoebaSampling {
  AmoebaWindow window;
  int resolution = 300;    // cells per axis
  int r_x_samples = 0;     // 0: one per column
  int phase_samples = 600;
  double max_failure_fraction = 0.01;
  bool keep_points = false;
};

/// Occupancy of the amoeba log|beta_x|, log|beta_y| of det[E - H] = 0.
///
/// Cells are indexed [ix * resolution + iy]. For each sampled r_x and each
/// modulus-ordered beta_y branch, the cells between consecutive phase
/// samples are filled as well: the k-th smallest root modulus is continuous
/// in the phase, so it passes through every intermediate value.
struct AmoebaRaster {
  AmoebaWindow window;
  int resolution = 0;
  std::vector<bool> occupancy;
  std::vector<int> counts;                  // raw sample hits per cell
  std::vector<std::vector<bool>> branches;  // occupancy per modulus rank
  std::vector<std::pair<double, double>> points;  // (r_x, log|beta_y|) when kept
  int samples = 0;
  int failed_samples = 0;

  bool occupied(int ix, int iy) const { return occupancy[static_cast<std::size_t>(ix) * resolution + iy]; }
  int occupied_cells() const;
};

AmoebaRaster amoeba_points(const LatticeModel& model, cplx energy, const AmoebaSampling& sampling = {});

/// Flood-fills unoccupied cells from the window border (4-connectivity);
/// true iff an unreached unoccupied component of at least min_hole_cells remains.
bool has_hole(const AmoebaRaster& raster, int min_hole_cells = 4);

/// E is in the 2D OBC spectrum iff its amoeba has no hole.
bool obc_member_2d(const LatticeModel& model, cplx energy, const AmoebaSampling& sampling = {},
                   int min_hole_cells = 4);

/// One-dimensional amoeba: the finite set log|beta_i(E)|.
struct Amoeba1D {
  std::vector<double> log_moduli;  // ascending
  int pole_order;
  double central_gap;  // log|beta_{q+1}| - log|beta_q|
  bool hole;
};

/// The central hole closes when the gap is below cell_width.
Amoeba1D amoeba_1d(const LatticeModel& model, cplx energy, double cell_width);

void write_amoeba_pgm(std::ostream& out, const AmoebaRaster& raster);

/// CSV "r_x,log_abs_beta_y" of the raw samples (requires keep_points).
void write_amoeba_points_csv(std::ostream& out, const AmoebaRaster& raster);

}  // namespace nhskin
