#include "nhskin/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <unsupported/Eigen/MatrixFunctions>

#include "nhskin/error.hpp"
#include "nhskin/io.hpp"
#include "nhskin/linalg.hpp"
#include "nhskin/spectral.hpp"

namespace nhskin {

namespace {

double spectral_norm(const CMatrix& h) {
  if (h.size() == 0) return 0.0;
  return linalg::singular_values(h)[0];
}

CMatrix shifted(const RealSpaceOperator& op, cplx omega) {
  const CMatrix& h = op.matrix();
  return omega * CMatrix::Identity(h.rows(), h.cols()) - h;
}

CMatrix drop_row_col(const CMatrix& m, int row, int col) {
  const Eigen::Index n = m.rows();
  CMatrix out(n - 1, n - 1);
  for (Eigen::Index i = 0, oi = 0; i < n; ++i) {
    if (i == row) continue;
    for (Eigen::Index j = 0, oj = 0; j < n; ++j) {
      if (j == col) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

}  // namespace

Susceptibility susceptibility(const RealSpaceOperator& op, cplx omega) {
  const CMatrix m = shifted(op, omega);
  const RVector sv = linalg::singular_values(m);
  const double hnorm = spectral_norm(op.matrix());
  if (!(sv[sv.size() - 1] > 1e-10 * hnorm))
    throw SingularProbeError("omega = " + format_complex(omega) +
                             " is on the spectrum (smallest singular value of omega I - H is " +
                             format_double(sv[sv.size() - 1]) + ")");
  Susceptibility s;
  s.omega = omega;
  const Eigen::PartialPivLU<CMatrix> lu(m);
  s.chi = cplx(0.0, -1.0) * lu.solve(CMatrix::Identity(m.rows(), m.cols()));
  const Eigen::MatrixXd a = s.chi.cwiseAbs();
  s.asymmetry = (a - a.transpose()).cwiseAbs().maxCoeff();
  return s;
}

ReciprocityResult reciprocity_test(const RealSpaceOperator& op, const std::vector<cplx>& omegas,
                                   double tol) {
  if (omegas.empty()) throw InvalidArgument("reciprocity_test needs at least one probe frequency");
  double worst = 0.0;
  for (const cplx& w : omegas) worst = std::max(worst, susceptibility(op, w).asymmetry);
  return {worst < tol, worst};
}

double directional_gain(const RealSpaceOperator& op, cplx omega, int from, int to) {
  const int n = op.size();
  if (from < 0 || to < 0 || from >= n || to >= n) throw InvalidArgument("site index out of range");
  if (from == to) return 0.0;
  const CMatrix m = shifted(op, omega);
  // (M^{-1})_{to,from} = C_{from,to} / det M, with C the cofactor matrix.
  const double forward = linalg::log_abs_det(drop_row_col(m, from, to));
  const double backward = linalg::log_abs_det(drop_row_col(m, to, from));
  if (!std::isfinite(forward) || !std::isfinite(backward))
    throw SingularProbeError("transfer between sites " + std::to_string(from) + " and " +
                             std::to_string(to) + " vanishes at omega = " + format_complex(omega));
  return forward - backward;
}

Trajectory time_evolve(const RealSpaceOperator& op, const CVector& psi0, double t_max, double dt) {
  const CMatrix& h = op.matrix();
  if (psi0.size() != h.rows()) throw InvalidArgument("initial state has the wrong length");
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (!(t_max >= 0.0)) throw InvalidArgument("t_max must be nonnegative");
  const double hnorm = spectral_norm(h);
  if (!(dt * hnorm < 0.5))
    throw InvalidArgument("step too large: dt * ||H|| = " + format_double(dt * hnorm) + " >= 0.5");
  const double norm0 = psi0.norm();
  if (!(norm0 > 0.0)) throw InvalidArgument("initial state is zero");

  const CMatrix step = (cplx(0.0, -dt) * h).exp();
  const int steps = static_cast<int>(std::llround(t_max / dt));
  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(psi0 / norm0);
  traj.log_growth.push_back(0.0);
  for (int k = 1; k <= steps; ++k) {
    CVector next = step * traj.states.back();
    const double g = next.norm();
    if (!(g > 0.0) || !std::isfinite(g))
      throw ComputationError("state vanished or overflowed at step " + std::to_string(k));
    traj.times.push_back(k * dt);
    traj.states.push_back(next / g);
    traj.log_growth.push_back(std::log(g));
  }
  return traj;
}

RVector state_density(const CVector& psi, const SiteIndex& index) {
  RVector d = RVector::Zero(index.cells());
  const double total = psi.squaredNorm();
  for (int r = 0; r < index.rows(); ++r) d[index.cell_of_row(r)] += std::norm(psi[r]) / total;
  return d;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const SiteIndex& index) {
  out << "t,site,density\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const RVector d = state_density(traj.states[k], index);
    for (Eigen::Index s = 0; s < d.size(); ++s)
      out << format_double(traj.times[k]) << ',' << s << ',' << format_double(d[s]) << '\n';
  }
}

RealSpaceOperator funnel_model(double jl, double jr, int n_half) {
  if (std::abs(jl) == std::abs(jr)) throw InvalidArgument("funnel needs |J_L| != |J_R|");
  if (n_half < 5) throw InvalidArgument("funnel needs at least 5 sites per half");
  const int n = 2 * n_half;
  CMatrix h = CMatrix::Zero(n, n);
  for (int m = 0; m + 1 < n; ++m) {
    double up, down;  // entries (m, m+1) and (m+1, m)
    if (m + 1 < n_half) {
      up = jl;
      down = jr;
    } else if (m >= n_half) {
      up = jr;
      down = jl;
    } else {
      up = down = 0.5 * (jl + jr);
    }
    h(m, m + 1) = up;
    h(m + 1, m) = down;
  }
  return RealSpaceOperator::from_matrix(std::move(h));
}

std::vector<SensorPoint> sensor_sweep(const LatticeModel& model, double epsilon,
                                      const std::vector<int>& sizes, cplx reference) {
  if (model.dimension() != 1) throw InvalidArgument("sensor_sweep needs a 1D model");
  constexpr double kTie = 1e-9;
  auto nearest = [&](const CVector& e) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < e.size(); ++i) best = std::min(best, std::abs(e[i] - reference));
    std::vector<cplx> tied;
    for (Eigen::Index i = 0; i < e.size(); ++i)
      if (std::abs(e[i] - reference) <= best + kTie) tied.push_back(e[i]);
    return tied;
  };
  std::vector<SensorPoint> out;
  for (int n : sizes) {
    const CVector open = sorted_eigenvalues(build_chain(model, n, AxisBoundary::open()).matrix());
    const CVector coupled =
        sorted_eigenvalues(build_chain(model, n, AxisBoundary::coupled(epsilon)).matrix());
    const auto before = nearest(open);
    const auto after = nearest(coupled);
    // Each open candidate follows its closest coupled candidate.
    std::vector<double> deltas;
    for (const cplx& a : before) {
      double d = std::numeric_limits<double>::infinity();
      for (const cplx& b : after) d = std::min(d, std::abs(b - a));
      deltas.push_back(d);
    }
    const auto [lo, hi] = std::minmax_element(deltas.begin(), deltas.end());
    if (*hi - *lo > std::max(kTie, 1e-6 * *hi))
      throw ComputationError("target state is ambiguous at N = " + std::to_string(n) + ": " +
                             std::to_string(before.size()) + " candidates near " +
                             format_complex(reference) + " shift by different amounts");
    out.push_back({n, *hi});
  }
  return out;
}

double sensor_slope(const std::vector<SensorPoint>& points) {
  if (points.size() < 2) throw InvalidArgument("slope needs at least two sizes");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : points) {
    if (!(p.delta_e > 0.0))
      throw InvalidArgument("zero shift at N = " + std::to_string(p.n) + "; slope undefined");
    const double x = p.n, y = std::log(p.delta_e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(points.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<CrossoverPoint> boundary_crossover(const LatticeModel& model, int n,
                                               const std::vector<double>& epsilons) {
  if (model.dimension() != 1) throw InvalidArgument("boundary_crossover needs a 1D model");
  const CVector open = sorted_eigenvalues(build_chain(model, n, AxisBoundary::open()).matrix());
  std::vector<CrossoverPoint> out;
  for (double eps : epsilons) {
    const CVector e = sorted_eigenvalues(build_chain(model, n, AxisBoundary::coupled(eps)).matrix());
    double max_imag = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) max_imag = std::max(max_imag, std::abs(e[i].imag()));
    out.push_back({eps, linalg::hausdorff(e, open), max_imag});
  }
  return out;
}

double crossover_epsilon(const std::vector<CrossoverPoint>& points) {
  if (points.size() < 2) throw InvalidArgument("crossover needs at least two couplings");
  std::vector<CrossoverPoint> p = points;
  std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.epsilon < b.epsilon; });
  if (!(p.front().epsilon > 0.0)) throw InvalidArgument("crossover couplings must be positive");
  const double target = 0.5 * p.back().distance_to_obc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].distance_to_obc < target) continue;
    if (i == 0) return p[0].epsilon;
    const double d0 = p[i - 1].distance_to_obc, d1 = p[i].distance_to_obc;
    const double t = d1 > d0 ? (target - d0) / (d1 - d0) : 1.0;
    return std::exp(std::log(p[i - 1].epsilon) + t * (std::log(p[i].epsilon) - std::log(p[i - 1].epsilon)));
  }
  return p.back().epsilon;
}

void write_sensor_csv(std::ostream& out, const std::vector<SensorPoint>& points) {
  out << "n,delta_e\n";
  for (const auto& p : points) out << p.n << ',' << format_double(p.delta_e) << '\n';
}

void write_crossover_csv(std::ostream& out, const std::vector<CrossoverPoint>& points) {
  out << "epsilon,distance_to_obc,max_imag\n";
  for (const auto& p : points)
    out << format_double(p.epsilon) << ',' << format_double(p.distance_to_obc) << ','
        << format_double(p.max_imag) << '\n';
}

}  // namespace nhskin
