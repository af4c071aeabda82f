#include <cmath>
#include <sstream>

#include "doctest.h"
#include "nhskin/error.hpp"
#include "nhskin/linalg.hpp"
#include "nhskin/response.hpp"
#include "nhskin/spectral.hpp"
#include "../oracles.hpp"

using namespace nhskin;

TEST_SUITE("response") {
  TEST_CASE("two-site susceptibility by hand") {
    const auto op = build_chain(builtin_hatano_nelson(0.5, 1.0), 2, AxisBoundary::open());
    const auto s = susceptibility(op, 2.0);
    CMatrix expect(2, 2);
    expect << 2.0, 0.5, 1.0, 2.0;
    expect *= cplx(0, -1) / 3.5;
    CHECK((s.chi - expect).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(std::abs(s.asymmetry - 0.5 / 3.5) < 1e-15);
  }

  TEST_CASE("resolvent identity") {
    const auto op = build_chain(builtin_nh_ssh(0.6, 1.0, 0.3), 12, AxisBoundary::open());
    for (cplx w : {cplx(3.0), cplx(0.2, 0.4), cplx(-1.1, 0.05)}) {
      const auto s = susceptibility(op, w);
      const CMatrix a = w * CMatrix::Identity(op.size(), op.size()) - op.matrix();
      const RVector sv = linalg::singular_values(a);
      const double kappa = sv[0] / sv[sv.size() - 1];
      CHECK((a * (cplx(0, 1) * s.chi) - CMatrix::Identity(op.size(), op.size())).cwiseAbs().maxCoeff() < 1e-8 * kappa);
      CHECK(s.asymmetry >= 0.0);
    }
  }

  TEST_CASE("reciprocity") {
    const std::vector<cplx> omegas{3.0, cplx(2, 1)};
    CHECK(reciprocity_test(build_chain(builtin_hatano_nelson(1, 1), 10, AxisBoundary::open()), omegas).reciprocal);
    CHECK_FALSE(reciprocity_test(build_chain(builtin_hatano_nelson(0.5, 1.0), 10, AxisBoundary::open()), omegas).reciprocal);
    CMatrix gain = CMatrix::Zero(4, 4);
    gain.diagonal() << cplx(0, 0.3), cplx(0, -0.2), 1.0, cplx(0.5, 0.1);
    CHECK(reciprocity_test(RealSpaceOperator::from_matrix(gain), omegas).reciprocal);
    // Complex symmetric: chi is symmetric too.
    CMatrix sym = CMatrix::Zero(5, 5);
    for (int i = 0; i + 1 < 5; ++i) sym(i, i + 1) = sym(i + 1, i) = cplx(0.3 * i, 1.0 - 0.1 * i);
    CHECK(reciprocity_test(RealSpaceOperator::from_matrix(sym), omegas).max_asymmetry < 1e-12);
  }

  TEST_CASE("singular probe") {
    const auto op = build_chain(builtin_hatano_nelson(0.5, 1.0), 3, AxisBoundary::open());
    CHECK_THROWS_AS(susceptibility(op, 0.0), SingularProbeError);
  }

  TEST_CASE("directional amplification") {
    const auto op = build_chain(builtin_hatano_nelson(0.5, 1.0), 20, AxisBoundary::open());
    const double g = directional_gain(op, 0.0, 0, 19);
    CHECK(std::abs(g - oracle::hn_amplification(0.5, 1.0, 20)) < 1e-9 * g);
    CHECK(std::abs(g - 19 * std::log(2.0)) < 1e-9);
    CHECK(std::abs(directional_gain(op, 0.0, 19, 0) + g) < 1e-9);
    // Finite at an eigenvalue (N = 3 has E = 0).
    const auto odd = build_chain(builtin_hatano_nelson(0.5, 1.0), 3, AxisBoundary::open());
    CHECK(std::abs(directional_gain(odd, 0.0, 0, 2) - oracle::hn_amplification(0.5, 1.0, 3)) < 1e-9);
  }

  TEST_CASE("time evolution") {
    const auto zero = RealSpaceOperator::from_matrix(CMatrix::Zero(4, 4));
    CVector psi(4);
    psi << 0.5, cplx(0, 0.5), -0.5, 0.5;
    const auto still = time_evolve(zero, psi, 1.0, 0.1);
    CHECK((still.states.back() - psi).norm() < 1e-15);

    const auto herm = build_chain(builtin_hatano_nelson(1, 1), 20, AxisBoundary::open());
    CVector d = CVector::Zero(20);
    d[7] = 1.0;
    const auto traj = time_evolve(herm, d, 5.0, 0.05);
    double growth = 0.0;
    for (double lg : traj.log_growth) growth += lg;
    CHECK(std::abs(growth) < 1e-10);
    for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
    for (const auto& s : traj.states) CHECK(std::abs(s.norm() - 1.0) < 1e-12);
    CHECK(traj.times.size() == 101);
    CHECK_THROWS_AS(time_evolve(herm, d, 5.0, 0.5), InvalidArgument);
    CHECK_THROWS_AS(time_evolve(herm, d, 5.0, 0.0), InvalidArgument);
  }

  TEST_CASE("funnel and anti-funnel eigenstates") {
    const auto funnel = funnel_model(0.5, 1.0, 30);
    const auto fs = eig_biorthogonal(funnel);
    for (int i = 0; i < fs.size(); ++i) {
      const RVector w = fs.right.col(i).cwiseAbs2();
      CHECK(w.segment(20, 20).sum() > 0.9);
    }
    const auto anti = funnel_model(1.0, 0.5, 30);
    const auto as = eig_biorthogonal(anti);
    for (int i = 0; i < as.size(); ++i) {
      const RVector w = as.right.col(i).cwiseAbs2();
      CHECK(w.head(10).sum() + w.tail(10).sum() > 0.9);
    }
    CHECK_THROWS_AS(funnel_model(1, 1, 30), InvalidArgument);
  }

  TEST_CASE("wave packet drifts to the funnel interface") {
    const auto op = funnel_model(0.5, 1.0, 30);
    CVector psi = CVector::Zero(60);
    psi[5] = 1.0;
    const auto traj = time_evolve(op, psi, 40.0, 0.05);
    CHECK(state_density(traj.states.back(), op.index()).segment(25, 10).sum() >= 0.8);
  }

  TEST_CASE("sensor sweeps") {
    const std::vector<int> sizes{10, 14, 18, 22};
    for (const auto& p : sensor_sweep(builtin_nh_ssh(0.6, 1.0, 0.3), 0.0, sizes)) CHECK(p.delta_e == 0.0);
    CHECK(sensor_slope(sensor_sweep(builtin_nh_ssh(0.6, 1.0, 0.0), 1e-4, sizes)) <= 0.0);
    // Deep in the linear regime the non-Hermitian shift grows with N.
    CHECK(sensor_slope(sensor_sweep(builtin_nh_ssh(0.6, 1.0, 0.3), 1e-8, sizes)) > 0.0);
    CHECK_THROWS(sensor_slope({{10, 0.0}, {12, 1.0}}));
  }

  TEST_CASE("boundary crossover") {
    const auto model = builtin_hatano_nelson(0.5, 1.0);
    std::vector<double> eps;
    for (int k = -16; k <= 0; ++k) eps.push_back(std::pow(10.0, k));
    const auto pts = boundary_crossover(model, 40, eps);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].distance_to_obc >= pts[i - 1].distance_to_obc - 1e-9);
    const CVector obc = sorted_eigenvalues(build_chain(model, 40, AxisBoundary::open()).matrix());
    const CVector pbc = sorted_eigenvalues(oracle::hn_matrix(0.5, 1.0, 40, 1.0));
    std::vector<cplx> a(obc.data(), obc.data() + obc.size()), b(pbc.data(), pbc.data() + pbc.size());
    CHECK(std::abs(pts.back().distance_to_obc - oracle::hausdorff(a, b)) < 1e-9);
    CHECK(crossover_epsilon(boundary_crossover(model, 40, eps)) < crossover_epsilon(boundary_crossover(model, 20, eps)));
  }

  TEST_CASE("sweep CSVs") {
    std::ostringstream s, c;
    write_sensor_csv(s, {{10, 0.5}});
    CHECK(s.str() == "n,delta_e\n10,0.5\n");
    write_crossover_csv(c, {{1e-3, 0.25, 0.125}});
    CHECK(c.str().rfind("epsilon,", 0) == 0);
  }
}
