#pragma once

#include <span>

#include "nhskin/types.hpp"

namespace nhskin::linalg {

/// Eigenpairs of a diagonally rescaled copy of the input.
///
/// With D = diag(exp(log_scale)), the input matrix is A = D A_b D^{-1} and
/// `vectors` holds unit-norm right eigenvectors of A_b. Right eigenvectors
/// of A are D * vectors; left eigenvectors of A are D^{-1} times those of
/// A_b^dagger. Keeping the scaling separate lets callers form products such as
/// V^{-1} without ever touching the badly scaled matrix D V_b.
struct BalancedEigen {
  CVector values;
  CMatrix vectors;  // empty when vectors were not requested
  RVector log_scale;
};

/// Log-scales x minimizing sum_{i!=j} |a_ij|^2 exp(2(x_j - x_i)).
///
/// The minimizer exists iff every weakly connected component of the
/// off-diagonal sparsity graph is strongly connected; otherwise (e.g. a
/// Jordan block) the zero vector is returned and `balanced` is set false.
/// Solved by damped Newton iteration on the graph-Laplacian Hessian.
RVector similarity_balance(const CMatrix& a, bool* balanced = nullptr);

/// exp(-x) a_ij exp(x) entrywise: the rescaled matrix D^{-1} A D.
CMatrix apply_similarity(const CMatrix& a, const RVector& log_scale);

/// Dense eigensolve (LAPACK zgeevx with its own balancing on top of the
/// exact similarity balancing). Throws ComputationError on QR failure.
BalancedEigen eig_balanced(const CMatrix& a, bool want_vectors);

CVector eigenvalues(const CMatrix& a);

/// Singular values, descending.
RVector singular_values(const CMatrix& a);

/// Number of singular values above rel_tol * largest.
int numerical_rank(const RVector& singular_values, double rel_tol);

/// log|det(a)|; -inf for an exactly singular matrix.
double log_abs_det(const CMatrix& a);

/// Symmetric Hausdorff distance between two finite point sets in C.
double hausdorff(std::span<const cplx> a, std::span<const cplx> b);
double hausdorff(const CVector& a, const CVector& b);

/// Inverse of A through row/column equilibration and partial-pivot LU.
CMatrix equilibrated_inverse(const CMatrix& a);

}  // namespace nhskin::linalg
