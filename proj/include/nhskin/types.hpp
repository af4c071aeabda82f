#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace nhskin {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Which boundary a state piles up on.
enum class Side { Left, Right, None };

const char* to_string(Side side);

}  // namespace nhskin
