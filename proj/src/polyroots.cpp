#include "nhskin/polyroots.hpp"

#include <algorithm>
#include <cmath>

#include "nhskin/error.hpp"
#include "nhskin/linalg.hpp"

namespace nhskin {

cplx poly_eval(std::span<const cplx> coeffs, cplx z) {
  cplx acc(0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

namespace {

cplx poly_derivative(std::span<const cplx> coeffs, cplx z) {
  cplx acc(0.0);
  for (std::size_t k = coeffs.size() - 1; k >= 1; --k) acc = acc * z + static_cast<double>(k) * coeffs[k];
  return acc;
}

void newton_polish(std::span<const cplx> coeffs, cplx& root) {
  for (int it = 0; it < 3; ++it) {
    const cplx p = poly_eval(coeffs, root);
    const cplx dp = poly_derivative(coeffs, root);
    if (p == cplx(0.0) || dp == cplx(0.0)) return;
    const cplx candidate = root - p / dp;
    if (std::abs(poly_eval(coeffs, candidate)) < std::abs(p))
      root = candidate;
    else
      return;
  }
}

}  // namespace

std::vector<cplx> poly_roots(std::span<const cplx> coeffs) {
  if (coeffs.size() < 2) throw InvalidArgument("polynomial of degree < 1 has no roots");
  const std::size_t degree = coeffs.size() - 1;
  const cplx lead = coeffs[degree];
  if (lead == cplx(0.0)) throw DegeneratePolynomialError("leading coefficient is zero");

  if (degree == 1) return {-coeffs[0] / lead};
  if (degree == 2) {
    const cplx a = lead, b = coeffs[1], c = coeffs[0];
    const cplx disc = std::sqrt(b * b - 4.0 * a * c);
    // Pick the sign that avoids cancellation, then use the product of roots.
    const cplx q = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc) : -0.5 * (b - disc);
    if (q == cplx(0.0)) return {cplx(0.0), cplx(0.0)};
    return {q / a, c / q};
  }

  CMatrix companion = CMatrix::Zero(degree, degree);
  for (std::size_t i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < degree; ++i) companion(i, degree - 1) = -coeffs[i] / lead;
  const CVector eig = linalg::eigenvalues(companion);
  std::vector<cplx> roots(eig.data(), eig.data() + eig.size());
  for (auto& r : roots) newton_polish(coeffs, r);
  return roots;
}

void sort_by_modulus(std::vector<cplx>& roots) {
  std::sort(roots.begin(), roots.end(),
            [](const cplx& a, const cplx& b) { return std::abs(a) < std::abs(b); });
  std::size_t start = 0;
  while (start < roots.size()) {
    std::size_t end = start + 1;
    while (end < roots.size() &&
           std::abs(roots[end]) - std::abs(roots[start]) <= 1e-12 * std::abs(roots[end]))
      ++end;
    std::sort(roots.begin() + start, roots.begin() + end,
              [](const cplx& a, const cplx& b) { return std::arg(a) < std::arg(b); });
    start = end;
  }
}

}  // namespace nhskin
