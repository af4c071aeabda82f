#pragma once

#include <iosfwd>
#include <vector>

#include "nhskin/model.hpp"
#include "nhskin/realspace.hpp"
#include "nhskin/types.hpp"

namespace nhskin {

/// chi(omega) = -i (omega I - H)^{-1}.
struct Susceptibility {
  cplx omega;
  CMatrix chi;
  double asymmetry;  // max_ij ||chi_ij| - |chi_ji||
};

/// Throws SingularProbeError when the smallest singular value of omega I - H
/// is at most 1e-10 ||H||.
Susceptibility susceptibility(const RealSpaceOperator& op, cplx omega);

struct ReciprocityResult {
  bool reciprocal;
  double max_asymmetry;
};

ReciprocityResult reciprocity_test(const RealSpaceOperator& op, const std::vector<cplx>& omegas,
                                   double tol = 1e-10);

/// log|chi_{to,from}| - log|chi_{from,to}|, evaluated through cofactors of
/// omega I - H so it stays finite when omega is an eigenvalue (where chi
/// itself does not exist but the ratio has a limit).
double directional_gain(const RealSpaceOperator& op, cplx omega, int from, int to);

/// Normalized states with the logged norm growth of every step.
struct Trajectory {
  std::vector<double> times;
  std::vector<CVector> states;      // unit norm
  std::vector<double> log_growth;   // log ||exp(-iH dt) psi|| per step; first entry 0
};

/// psi(t + dt) = exp(-i H dt) psi(t) with the step propagator formed once.
/// Requires dt > 0 and dt ||H||_2 < 0.5.
Trajectory time_evolve(const RealSpaceOperator& op, const CVector& psi0, double t_max, double dt);

/// Cell densities of a trajectory state.
RVector state_density(const CVector& psi, const SiteIndex& index);

/// CSV "t,site,density".
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const SiteIndex& index);

/// Chain of 2 n_half sites: (J_L, J_R) on the left half, (J_R, J_L) on the
/// right half and the averaged amplitudes on the bond joining them.
RealSpaceOperator funnel_model(double jl, double jr, int n_half);

struct SensorPoint {
  int n;
  double delta_e;
};

/// |E_target(coupled eps) - E_target(open)| per size, where the target is
/// the eigenvalue nearest `reference`. Tied candidates (within 1e-9) are
/// accepted only when they give the same shift.
std::vector<SensorPoint> sensor_sweep(const LatticeModel& model, double epsilon,
                                      const std::vector<int>& sizes, cplx reference = 0.0);

/// Least-squares slope of ln delta_E against N. Throws when a shift is zero.
double sensor_slope(const std::vector<SensorPoint>& points);

struct CrossoverPoint {
  double epsilon;
  double distance_to_obc;
  double max_imag;
};

std::vector<CrossoverPoint> boundary_crossover(const LatticeModel& model, int n,
                                               const std::vector<double>& epsilons);

/// Smallest epsilon where the distance reaches half its value at the largest
/// epsilon, log-interpolated between neighbouring samples.
double crossover_epsilon(const std::vector<CrossoverPoint>& points);

/// CSV "parameter,observable..." helpers for sweeps.
void write_sensor_csv(std::ostream& out, const std::vector<SensorPoint>& points);
void write_crossover_csv(std::ostream& out, const std::vector<CrossoverPoint>& points);

}  // namespace nhskin
