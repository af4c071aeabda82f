#pragma once

#include <span>
#include <vector>

#include "nhskin/types.hpp"

namespace nhskin {

/// All roots of c[0] + c[1] z + ... + c[n] z^n (c[n] != 0, n >= 1).
///
/// Degrees 1 and 2 use closed forms (the quadratic in its cancellation-free
/// variant); higher degrees use the eigenvalues of the balanced companion
/// matrix followed by guarded Newton polishing.
std::vector<cplx> poly_roots(std::span<const cplx> coeffs);

/// Ascending by modulus; moduli equal to 1e-12 relative are ordered by
/// argument in (-pi, pi].
void sort_by_modulus(std::vector<cplx>& roots);

cplx poly_eval(std::span<const cplx> coeffs, cplx z);

}  // namespace nhskin
