#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "nhskin/model.hpp"
#include "nhskin/types.hpp"

namespace nhskin {

constexpr double kDefaultGapTol = 1e-6;

struct PointGap {
  bool open;
  double min_dist;
};

/// Distance from E_B to the PBC bands sampled at k_j = -pi + 2 pi j / k_grid.
/// One-dimensional models only.
PointGap point_gap_open(const LatticeModel& model, cplx base, int k_grid = 2048,
                        double gap_tol = kDefaultGapTol);

struct WindingResult {
  int w;
  cplx base;
  cplx raw_integral;
  int k_samples_used;
};

/// Winding of det[H(k)] - E_B around zero as k runs over [-pi, pi].
///
/// The phase is unwrapped on an adaptively bisected grid until every step
/// turns by less than pi/2. Throws GapClosedError when the point gap at E_B
/// is closed or the curve passes within gap_tol of zero, ComputationError if
/// the raw integral is not within 1e-4 of an integer.
WindingResult winding_number(const LatticeModel& model, cplx base,
                             double gap_tol = kDefaultGapTol);

/// w < 0: Right, w > 0: Left, w = 0: None.
Side predict_skin_side(const WindingResult& w);

/// Winding on a list of base points; empty optional where the gap is closed.
std::vector<std::optional<int>> winding_grid(const LatticeModel& model,
                                             const std::vector<cplx>& bases,
                                             double gap_tol = kDefaultGapTol);

/// CSV "re,im,w" with w = "gap" where undefined.
void write_winding_csv(std::ostream& out, const std::vector<cplx>& bases,
                       const std::vector<std::optional<int>>& w);

}  // namespace nhskin
