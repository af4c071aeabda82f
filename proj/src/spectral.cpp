#include "nhskin/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "nhskin/error.hpp"
#include "nhskin/io.hpp"
#include "nhskin/linalg.hpp"

namespace nhskin {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::vector<int> spectral_order(const CVector& values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (values[a].real() != values[b].real()) return values[a].real() < values[b].real();
    return values[a].imag() < values[b].imag();
  });
  return order;
}

void fix_phase(Eigen::Ref<CVector> v) {
  Eigen::Index at = 0;
  v.cwiseAbs().maxCoeff(&at);
  const double mag = std::abs(v[at]);
  if (mag > 0.0) v *= std::conj(v[at]) / mag;
}

double min_pair_gap(const CVector& values) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < values.size(); ++i)
    for (Eigen::Index j = i + 1; j < values.size(); ++j)
      gap = std::min(gap, std::abs(values[i] - values[j]));
  return gap;
}

// Left vectors from an adjoint eigensolve; eigenvalues of H^dagger are
// matched to conj(E_i) globally, closest pairs first.
CMatrix left_from_adjoint(const CMatrix& h, const CVector& values) {
  const int n = static_cast<int>(values.size());
  const auto adj = linalg::eig_balanced(h.adjoint(), true);
  CMatrix w(n, n);
  for (int j = 0; j < n; ++j) {
    CVector v = adj.log_scale.array().exp().matrix().asDiagonal() * adj.vectors.col(j);
    w.col(j) = v / v.norm();
  }
  struct Pair {
    double dist;
    int i;
    int j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pairs.push_back({std::abs(std::conj(adj.values[j]) - values[i]), i, j});
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.dist < b.dist; });
  std::vector<char> used_i(n, 0), used_j(n, 0);
  CMatrix left(n, n);
  int matched = 0;
  for (const auto& p : pairs) {
    if (used_i[p.i] || used_j[p.j]) continue;
    used_i[p.i] = used_j[p.j] = 1;
    left.col(p.i) = w.col(p.j);
    if (++matched == n) break;
  }
  return left;
}

}  // namespace

CVector sorted_eigenvalues(const CMatrix& h) {
  const CVector values = linalg::eigenvalues(h);
  const auto order = spectral_order(values);
  CVector out(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) out[i] = values[order[i]];
  return out;
}

BiorthogonalSystem eig_biorthogonal(const CMatrix& h, double tol_biorth) {
  if (h.rows() != h.cols()) throw InvalidArgument("eig_biorthogonal needs a square matrix");
  if (!h.allFinite()) throw InvalidArgument("matrix has non-finite entries");
  const int n = static_cast<int>(h.rows());
  BiorthogonalSystem sys;
  if (n == 0) return sys;

  const auto be = linalg::eig_balanced(h, true);
  const auto order = spectral_order(be.values);
  const RVector scale = be.log_scale.array().exp().matrix();

  sys.eigenvalues.resize(n);
  sys.right.resize(n, n);
  // Column norms of D V_b, kept so R^{-1} can be formed from V_b^{-1}.
  RVector gamma(n);
  CVector phase(n);
  for (int c = 0; c < n; ++c) {
    const int src = order[c];
    sys.eigenvalues[c] = be.values[src];
    CVector v = scale.asDiagonal() * be.vectors.col(src);
    gamma[c] = v.norm();
    v /= gamma[c];
    const CVector before = v;
    fix_phase(v);
    phase[c] = before.norm() > 0.0 ? v.dot(before) : cplx(1.0);  // v = before * conj(phase)
    sys.right.col(c) = v;
  }

  const RVector sv = linalg::singular_values(sys.right);
  const double smin = sv[sv.size() - 1];
  sys.kappa_v = smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
  sys.defect_estimate = n - linalg::numerical_rank(sv, std::sqrt(kEps));
  sys.min_pair_gap = n > 1 ? min_pair_gap(sys.eigenvalues) : std::numeric_limits<double>::infinity();

  const double kappa_limit = 1.0 / std::sqrt(kEps);
  if (sys.kappa_v < kappa_limit) {
    // R = D V_b P Gamma^{-1} Phi  =>  R^{-1} = Phi^{-1} Gamma P^T V_b^{-1} D^{-1}.
    const CMatrix vb_inv = linalg::equilibrated_inverse(be.vectors);
    sys.left.resize(n, n);
    for (int c = 0; c < n; ++c) {
      const int src = order[c];
      // Row c of R^{-1}; conj(phase) undoes the phase fix since |phase| = 1.
      CVector row = (vb_inv.row(src).transpose().array() / scale.array()).matrix() *
                    (gamma[c] * phase[c]);
      sys.left.col(c) = row.conjugate();
    }
    sys.left_from_inverse = true;
  } else {
    sys.left = left_from_adjoint(h, sys.eigenvalues);
  }

  sys.overlaps.resize(n);
  for (int c = 0; c < n; ++c) {
    const double lnorm = sys.left.col(c).norm();
    const cplx ov = sys.left.col(c).dot(sys.right.col(c));
    sys.overlaps[c] = lnorm > 0.0 ? std::abs(ov) / lnorm : 0.0;
    if (sys.overlaps[c] > kEps)
      sys.left.col(c) /= std::conj(ov);
    else if (lnorm > 0.0)
      sys.left.col(c) /= lnorm;
  }

  const CMatrix gram = sys.left.adjoint() * sys.right;
  sys.biorthogonality_error = (gram - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!std::isfinite(sys.biorthogonality_error))
    sys.biorthogonality_error = std::numeric_limits<double>::infinity();
  sys.ep_flag = !(sys.kappa_v < kappa_limit) || !(sys.biorthogonality_error <= tol_biorth);
  return sys;
}

BiorthogonalSystem eig_biorthogonal(const RealSpaceOperator& op, double tol_biorth) {
  return eig_biorthogonal(op.matrix(), tol_biorth);
}

double non_normality(const CMatrix& h) {
  const CMatrix hd = h.adjoint();
  return (h * hd - hd * h).norm();
}

double non_normality(const RealSpaceOperator& op) { return non_normality(op.matrix()); }

EpDiagnostic ep_diagnostic(const RealSpaceOperator& op) {
  const auto sys = eig_biorthogonal(op);
  return {sys.kappa_v, sys.min_pair_gap, sys.defect_estimate};
}

void write_spectrum_csv(std::ostream& out, const BiorthogonalSystem& sys, bool with_vectors) {
  const int n = sys.size();
  out << "index,re,im,kappa";
  if (with_vectors)
    for (int s = 0; s < sys.right.rows(); ++s) out << ",abs_psi_" << s;
  out << '\n';
  for (int i = 0; i < n; ++i) {
    const double kappa = sys.overlaps[i] > 0.0 ? 1.0 / sys.overlaps[i]
                                                : std::numeric_limits<double>::infinity();
    out << i << ',' << format_double(sys.eigenvalues[i].real()) << ','
        << format_double(sys.eigenvalues[i].imag()) << ',' << format_double(kappa);
    if (with_vectors)
      for (int s = 0; s < sys.right.rows(); ++s) out << ',' << format_double(std::abs(sys.right(s, i)));
    out << '\n';
  }
}

}  // namespace nhskin
