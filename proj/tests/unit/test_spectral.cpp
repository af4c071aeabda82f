#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "nhskin/error.hpp"
#include "nhskin/localization.hpp"
#include "nhskin/realspace.hpp"
#include "nhskin/spectral.hpp"
#include "../oracles.hpp"

using namespace nhskin;

namespace {

void check_decomposition(const CMatrix& h, const BiorthogonalSystem& sys, double tol) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const CMatrix lam = sys.eigenvalues.asDiagonal();
  for (int i = 0; i < sys.size(); ++i) {
    CHECK((h * sys.right.col(i) - sys.eigenvalues[i] * sys.right.col(i)).norm() < tol * scale);
    CHECK(std::abs(sys.right.col(i).norm() - 1.0) < 1e-12);
  }
  // Left vectors: L^dagger H = Lambda L^dagger, scaled by their norm.
  const CMatrix lh = sys.left.adjoint() * h - lam * sys.left.adjoint();
  for (int i = 0; i < sys.size(); ++i)
    CHECK(lh.row(i).norm() < tol * scale * std::max(1.0, sys.left.col(i).norm()));
  CHECK(sys.biorthogonality_error < 1e-8);
  CHECK((sys.right * sys.left.adjoint() - CMatrix::Identity(h.rows(), h.rows())).cwiseAbs().maxCoeff() < 1e-8);
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("Hatano-Nelson N=4 closed form") {
    const auto sys = eig_biorthogonal(build_chain(builtin_hatano_nelson(0.5, 1.0), 4, AxisBoundary::open()));
    const auto exact = oracle::hn_obc_spectrum(0.5, 1.0, 4);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(sys.eigenvalues[i] - exact[i]) < 1e-12);
      CHECK(std::abs(sys.eigenvalues[i].imag()) < 1e-12);
    }
    CHECK(std::abs(std::abs(exact[3]) - 1.1441) < 1e-4);
    CHECK(std::abs(std::abs(exact[2]) - 0.4370) < 1e-4);
    CHECK_FALSE(sys.ep_flag);
  }

  TEST_CASE("Hatano-Nelson N=40 closed form despite non-normality") {
    const CVector e = sorted_eigenvalues(build_chain(builtin_hatano_nelson(0.5, 1.0), 40, AxisBoundary::open()).matrix());
    const auto exact = oracle::hn_obc_spectrum(0.5, 1.0, 40);
    for (int i = 0; i < 40; ++i) CHECK(std::abs(e[i] - exact[i]) < 1e-9);
  }

  TEST_CASE("residuals, biorthogonality and completeness") {
    const auto ssh = build_chain(builtin_nh_ssh(0.6, 1.0, 0.3), 20, AxisBoundary::open());
    const auto sys = eig_biorthogonal(ssh);
    CHECK_FALSE(sys.ep_flag);
    check_decomposition(ssh.matrix(), sys, 1e-10);

    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    CMatrix r(30, 30);
    for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = cplx(g(rng), g(rng));
    const auto rs = eig_biorthogonal(r);
    check_decomposition(r, rs, 1e-10);
    for (int i = 1; i < rs.size(); ++i) {
      const auto a = rs.eigenvalues[i - 1], b = rs.eigenvalues[i];
      CHECK((a.real() < b.real() || (a.real() == b.real() && a.imag() <= b.imag())));
    }
  }

  TEST_CASE("Hermitian chain: L equals R and kappa_V is one") {
    const auto sys = eig_biorthogonal(build_chain(builtin_hatano_nelson(1, 1), 10, AxisBoundary::open()));
    CHECK(std::abs(sys.kappa_v - 1.0) < 1e-10);
    for (int i = 0; i < sys.size(); ++i) CHECK(std::abs(std::abs(sys.left.col(i).dot(sys.right.col(i))) - 1.0) < 1e-10);
    CHECK((sys.left - sys.right).cwiseAbs().maxCoeff() < 1e-8);
    const auto ep = ep_diagnostic(build_chain(builtin_hatano_nelson(1, 1), 10, AxisBoundary::open()));
    CHECK(ep.defect_estimate == 0);
    CHECK(ep.kappa_v < 10);
  }

  TEST_CASE("one-way hopping is a Jordan block") {
    const auto op = build_chain(builtin_hatano_nelson(0, 1), 10, AxisBoundary::open());
    const auto sys = eig_biorthogonal(op);
    CHECK(sys.ep_flag);
    CHECK(sys.eigenvalues.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ep_diagnostic(op).defect_estimate == 9);
  }

  TEST_CASE("kappa_V grows with N") {
    double prev = 0.0;
    for (int n : {10, 20, 40}) {
      const double k = ep_diagnostic(build_chain(builtin_hatano_nelson(0.5, 1.0), n, AxisBoundary::open())).kappa_v;
      CHECK(k > prev);
      prev = k;
    }
  }

  TEST_CASE("skin side follows the stronger hopping") {
    for (auto [jl, jr, side] : {std::tuple{0.5, 1.0, Side::Right}, std::tuple{1.0, 0.5, Side::Left}}) {
      const auto op = build_chain(builtin_hatano_nelson(jl, jr), 30, AxisBoundary::open());
      const auto sys = eig_biorthogonal(op);
      for (int i = 0; i < sys.size(); ++i)
        CHECK(dominant_half(density_profile(sys.right.col(i), op.index())) == side);
    }
  }

  TEST_CASE("non-normality") {
    CHECK(std::abs(non_normality(build_chain(builtin_hatano_nelson(0.5, 1.0), 2, AxisBoundary::open())) -
                   std::sqrt(2.0) * 0.75) < 1e-12);
    for (int n : {3, 10, 25})
      CHECK(non_normality(build_chain(builtin_hatano_nelson(1, 1), n, AxisBoundary::open())) < 1e-12);
    CMatrix d = CMatrix::Zero(4, 4);
    d.diagonal() << cplx(1, 2), cplx(-1, 0.5), cplx(0, -3), 2.0;
    CHECK(non_normality(d) < 1e-12);
  }

  TEST_CASE("spectrum CSV") {
    std::ostringstream out;
    write_spectrum_csv(out, eig_biorthogonal(build_chain(builtin_hatano_nelson(1, 1), 3, AxisBoundary::open())), true);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "index,re,im,kappa,abs_psi_0,abs_psi_1,abs_psi_2");
    int lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    CHECK(lines == 3);
  }
}
