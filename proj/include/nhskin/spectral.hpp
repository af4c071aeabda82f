#pragma once

#include <iosfwd>

#include "nhskin/realspace.hpp"
#include "nhskin/types.hpp"

namespace nhskin {

/// Matched eigenvalues with right and left eigenvectors.
///
/// Columns of `right` have unit norm with their largest component real and
/// positive. Column i of `left` satisfies <L_i|R_i> = 1 whenever the pair is
/// not numerically orthogonal; an exactly defective pair (overlap below
/// machine epsilon) keeps a unit-norm L_i so downstream code can refuse it.
struct BiorthogonalSystem {
  CVector eigenvalues;  // ascending by real part, ties by imaginary part
  CMatrix right;
  CMatrix left;
  /// |<L_i|R_i>| for unit-norm L_i, R_i; 1/overlap is the eigenvalue condition number.
  RVector overlaps;
  double kappa_v = 0.0;
  double min_pair_gap = 0.0;
  double biorthogonality_error = 0.0;  // max |<L_i|R_j> - delta_ij|
  int defect_estimate = 0;
  bool ep_flag = false;
  bool left_from_inverse = false;

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

BiorthogonalSystem eig_biorthogonal(const CMatrix& h, double tol_biorth = 1e-8);
BiorthogonalSystem eig_biorthogonal(const RealSpaceOperator& op, double tol_biorth = 1e-8);

/// Eigenvalues only, in the same order eig_biorthogonal uses.
CVector sorted_eigenvalues(const CMatrix& h);

/// ||H H^dagger - H^dagger H||_F.
double non_normality(const CMatrix& h);
double non_normality(const RealSpaceOperator& op);

struct EpDiagnostic {
  double kappa_v;
  double min_pair_gap;
  int defect_estimate;
};

EpDiagnostic ep_diagnostic(const RealSpaceOperator& op);

/// CSV "index,re,im,kappa" with optional abs_psi_<site> columns of the
/// right vectors.
void write_spectrum_csv(std::ostream& out, const BiorthogonalSystem& sys, bool with_vectors);

}  // namespace nhskin
