#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "nhskin/types.hpp"

namespace nhskin {

using Offset = std::vector<int>;

/// Amplitude matrix A_d of the operator sum_m c^dagger_m A_d c_{m+d}.
///
/// With this convention H(k) = sum_d A_d exp(i k.d) and
/// H(beta) = sum_d A_d prod_i beta_i^{d_i}; the Hatano-Nelson built-in then
/// has E(k) = (J_L + J_R) cos k + i (J_L - J_R) sin k.
struct HoppingTerm {
  Offset offset;
  CMatrix amplitude;
};

/// Translation-invariant tight-binding model in one or two dimensions.
///
/// Terms sharing an offset are summed at construction and the result is kept
/// sorted by offset, so two models built from the same terms in any order
/// compare equal term by term. A term whose amplitude is identically zero is
/// kept: it marks a hopping channel that exists but vanishes (J_L = 0), which
/// matters for degeneracy checks on the characteristic polynomial.
class LatticeModel {
 public:
  LatticeModel(int dimension, int bands, std::vector<HoppingTerm> terms, std::string name = {});

  int dimension() const noexcept { return dimension_; }
  int bands() const noexcept { return bands_; }
  const std::vector<HoppingTerm>& terms() const noexcept { return terms_; }
  const std::string& name() const noexcept { return name_; }

  /// Largest |d_axis| over all terms.
  int range(int axis) const;

  LatticeModel scaled(cplx factor) const;

 private:
  int dimension_;
  int bands_;
  std::vector<HoppingTerm> terms_;
  std::string name_;
};

/// J_L at d = +1, J_R at d = -1.
LatticeModel builtin_hatano_nelson(double jl, double jr);

/// Two-band chain, orbitals (A, B). Intra-cell A<-B is t1+gamma and B<-A is
/// t1-gamma; the inter-cell bond B_n <-> A_{n+1} is symmetric with amplitude t2.
LatticeModel builtin_nh_ssh(double t1, double t2, double gamma);

/// Single-band square lattice with asymmetric nearest-neighbour hopping
/// (J_L at (+1,0),(0,-1); J_R at (-1,0),(0,+1)) and symmetric diagonal t'.
LatticeModel builtin_2d(double jl, double jr, double tp);

/// H(k). Throws InvalidArgument on dimension mismatch or non-finite k.
CMatrix bloch(const LatticeModel& model, std::span<const double> k);

/// H(beta). Throws InvalidArgument on dimension mismatch or any beta_i = 0.
CMatrix nonbloch(const LatticeModel& model, std::span<const cplx> beta);

/// Laurent polynomial det[E - H(beta)] in one or two variables.
class CharPoly {
 public:
  using Exponents = std::vector<int>;

  CharPoly(int variables, std::map<Exponents, cplx> coefficients);

  int variables() const noexcept { return variables_; }
  const std::map<Exponents, cplx>& coefficients() const noexcept { return coefficients_; }

  int min_exponent(int axis) const { return min_[axis]; }
  int max_exponent(int axis) const { return max_[axis]; }
  double max_abs_coefficient() const noexcept { return max_abs_; }

  /// Coefficient at the given exponents (zero when absent).
  cplx coefficient(const Exponents& e) const;

  /// Univariate only: magnitude of the coefficient at the top / bottom exponent.
  double leading_magnitude() const;
  double trailing_magnitude() const;

  cplx evaluate(std::span<const cplx> beta) const;

  /// Univariate only: ascending coefficients of beta^q P(beta), q = -min exponent.
  std::vector<cplx> cleared() const;

  /// Bivariate only: with beta_x fixed, ascending coefficients in beta_y of
  /// beta_y^{q_y} P(beta_x, beta_y).
  std::vector<cplx> cleared_in_y(cplx beta_x) const;

 private:
  int variables_;
  std::map<Exponents, cplx> coefficients_;
  std::vector<int> min_, max_;
  double max_abs_ = 0.0;
};

/// det[E - H(beta)] expanded over monomials by Laplace expansion of the
/// band matrix of Laurent polynomials (exact bookkeeping, no sampling).
CharPoly char_poly(const LatticeModel& model, cplx energy);

}  // namespace nhskin
