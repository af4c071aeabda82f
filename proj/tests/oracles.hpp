#pragma once

// Reference computations that share no code path with the library: closed
// forms, direct matrix assembly and root counting by brute force.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

/// HN dispersion written out by hand.
inline cplx hn_dispersion(double jl, double jr, double k) {
  return cplx((jl + jr) * std::cos(k), (jl - jr) * std::sin(k));
}

/// OBC Hatano-Nelson spectrum 2 sqrt(J_L J_R) cos(m pi / (N+1)), ascending.
inline std::vector<double> hn_obc_spectrum(double jl, double jr, int n) {
  std::vector<double> e;
  for (int m = 1; m <= n; ++m) e.push_back(2.0 * std::sqrt(jl * jr) * std::cos(m * pi / (n + 1)));
  std::sort(e.begin(), e.end());
  return e;
}

/// Dense OBC/PBC Hatano-Nelson matrix, assembled directly.
inline Eigen::MatrixXcd hn_matrix(double jl, double jr, int n, cplx wrap) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (int m = 0; m + 1 < n; ++m) {
    h(m, m + 1) = jl;
    h(m + 1, m) = jr;
  }
  h(n - 1, 0) += wrap * jl;
  h(0, n - 1) += wrap * jr;
  return h;
}

/// Biorthogonal participation ratio of the m-th OBC HN eigenstate. The
/// similarity S = diag(r^n) maps H to a symmetric tridiagonal matrix with
/// sine eigenvectors phi, so R = S phi, L = S^{-1} phi and conj(L) R = phi^2.
inline double hn_biorthogonal_pr(int n, int m) {
  double s1 = 0.0, s2 = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double w = std::pow(std::sin(m * j * pi / (n + 1)), 2);
    s1 += w;
    s2 += w * w;
  }
  return s1 * s1 / s2;
}

/// Winding of a single-band Laurent polynomial sum_d c_d beta^d minus E_B
/// around the unit circle by the argument principle: zeros of
/// beta^q (E(beta) - E_B) inside |beta| < 1 minus the pole order q. Roots
/// come from the unbalanced companion matrix via Eigen's generic solver.
inline int laurent_winding(const std::vector<std::pair<int, cplx>>& terms, cplx base) {
  int lo = 0, hi = 0;
  for (const auto& [d, c] : terms) {
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  std::vector<cplx> coeff(hi - lo + 1, 0.0);
  for (const auto& [d, c] : terms) coeff[d - lo] += c;
  coeff[-lo] -= base;
  while (coeff.size() > 1 && coeff.back() == cplx(0.0)) coeff.pop_back();
  const int deg = static_cast<int>(coeff.size()) - 1;
  int inside = 0;
  if (deg > 0) {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeff[i] / coeff[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    for (int i = 0; i < deg; ++i) inside += std::abs(es.eigenvalues()[i]) < 1.0;
  }
  return inside - (-lo);
}

/// Hausdorff distance between two point sets, brute force.
inline double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  auto directed = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
    double worst = 0.0;
    for (const auto& p : x) {
      double best = 1e300;
      for (const auto& q : y) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

/// Least-squares slope of y against x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// log(|chi_{N,1}| / |chi_{1,N}|) for an OBC HN chain at omega = 0 from the
/// Toeplitz cofactor structure: (J_R / J_L)^{N-1}.
inline double hn_amplification(double jl, double jr, int n) { return (n - 1) * std::log(jr / jl); }

}  // namespace oracle
