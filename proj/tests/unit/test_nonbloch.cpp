#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "nhskin/error.hpp"
#include "nhskin/localization.hpp"
#include "nhskin/nonbloch.hpp"
#include "nhskin/realspace.hpp"
#include "nhskin/spectral.hpp"
#include "../oracles.hpp"

using namespace nhskin;

namespace {

AmoebaRaster synthetic_raster(int res, const std::function<bool(int, int)>& filled) {
  AmoebaRaster r;
  r.resolution = res;
  r.occupancy.assign(static_cast<std::size_t>(res) * res, false);
  for (int ix = 0; ix < res; ++ix)
    for (int iy = 0; iy < res; ++iy) r.occupancy[static_cast<std::size_t>(ix) * res + iy] = filled(ix, iy);
  return r;
}

}  // namespace

TEST_SUITE("nonbloch") {
  TEST_CASE("beta roots examples") {
    const auto r = beta_roots(builtin_hatano_nelson(0.5, 1.0), 0.0);
    REQUIRE(r.size() == 2);
    CHECK(std::abs(r[0] - cplx(0, -std::sqrt(2.0))) < 1e-12);
    CHECK(std::abs(r[1] - cplx(0, std::sqrt(2.0))) < 1e-12);
    for (const auto& b : beta_roots(builtin_hatano_nelson(1, 1), 0.0)) CHECK(std::abs(std::abs(b) - 1.0) < 1e-12);
    CHECK_THROWS_AS(beta_roots(builtin_hatano_nelson(0, 1), 0.3), DegeneratePolynomialError);
  }

  TEST_CASE("root moduli multiply to the coefficient ratio") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int draw = 0; draw < 20; ++draw) {
      std::vector<HoppingTerm> terms;
      const int lo = -1 - draw % 2, hi = 1 + draw % 3;
      std::map<int, cplx> c;
      for (int d = lo; d <= hi; ++d) {
        CMatrix m(1, 1);
        m(0, 0) = cplx(u(rng), u(rng));
        c[d] = m(0, 0);
        terms.push_back({{d}, m});
      }
      const cplx e(u(rng), u(rng));
      const auto roots = beta_roots(LatticeModel(1, 1, terms), e);
      CHECK(static_cast<int>(roots.size()) == hi - lo);
      double prod = 1.0;
      for (const auto& b : roots) prod *= std::abs(b);
      CHECK(std::abs(prod - std::abs(c[lo] / c[hi])) < 1e-8 * std::max(1.0, prod));
      for (std::size_t i = 1; i < roots.size(); ++i) CHECK(std::abs(roots[i - 1]) <= std::abs(roots[i]));
    }
  }

  TEST_CASE("GBZ membership examples") {
    const auto hn = builtin_hatano_nelson(0.5, 1.0);
    const auto in = gbz_membership(hn, 1.0);
    CHECK(in.member);
    CHECK(std::abs(std::abs(in.beta_pair.first) - std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(std::abs(in.beta_pair.second) - std::sqrt(2.0)) < 1e-12);
    const auto out = gbz_membership(hn, cplx(0, 2));
    CHECK_FALSE(out.member);
    CHECK(out.residual > 0.1);
    const auto herm = gbz_membership(builtin_hatano_nelson(1, 1), 1.0);
    CHECK(herm.member);
    CHECK(std::abs(std::abs(herm.beta_pair.first) - 1.0) < 1e-12);
  }

  TEST_CASE("GBZ curves of the Hatano-Nelson chain") {
    for (auto [jl, jr, radius, side] : {std::tuple{0.5, 1.0, std::sqrt(2.0), Side::Right},
                                        std::tuple{1.0, 0.5, 1.0 / std::sqrt(2.0), Side::Left},
                                        std::tuple{1.0, 1.0, 1.0, Side::None}}) {
      const auto model = builtin_hatano_nelson(jl, jr);
      const auto curve = gbz_curve(model, 100);
      REQUIRE(!curve.samples.empty());
      for (const auto& s : curve.samples) {
        CHECK(std::abs(std::abs(s.beta) - radius) < 1e-6);
        CHECK(s.modulus_residual < kDefaultGbzTol);
        CHECK(std::abs(nonbloch(model, std::vector<cplx>{s.beta})(0, 0) - s.energy) < 1e-8);
      }
      CHECK(gbz_side(curve.samples) == side);
    }
  }

  TEST_CASE("two-band GBZ samples solve the eigenvalue equation") {
    const auto model = builtin_nh_ssh(0.6, 1.0, 0.3);
    const auto curve = gbz_curve(model, 60);
    REQUIRE(!curve.samples.empty());
    for (const auto& s : curve.samples) {
      Eigen::ComplexEigenSolver<CMatrix> es(nonbloch(model, std::vector<cplx>{s.beta}), false);
      CHECK((es.eigenvalues().array() - s.energy).abs().minCoeff() < 1e-8);
    }
  }

  TEST_CASE("energy scan reproduces the dense OBC spectrum") {
    const auto model = builtin_nh_ssh(0.6, 1.0, 0.3);
    std::vector<cplx> scan;
    for (const auto& s : gbz_energy_scan(model)) scan.push_back(s.energy);
    REQUIRE(!scan.empty());
    const CVector dense = sorted_eigenvalues(build_chain(model, 200, AxisBoundary::open()).matrix());
    std::vector<cplx> obc;
    for (Eigen::Index i = 0; i < dense.size(); ++i)
      if (std::abs(dense[i]) > 1e-3) obc.push_back(dense[i]);  // drop the edge-state pair
    CHECK(oracle::hausdorff(scan, obc) < 0.05);
  }

  TEST_CASE("GBZ side agrees with measured localization") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.2, 1.2);
    for (int draw = 0; draw < 10; ++draw) {
      double jl = u(rng), jr = u(rng);
      if (std::abs(std::log(jl / jr)) < 0.2) jr = jl * 1.5;
      const auto model = builtin_hatano_nelson(jl, jr);
      const auto op = build_chain(model, 40, AxisBoundary::open());
      const auto sys = eig_biorthogonal(op);
      int right = 0, left = 0;
      for (int i = 0; i < sys.size(); ++i) {
        const auto c = classify_state(sys.left.col(i), sys.right.col(i), op);
        right += c.side == Side::Right;
        left += c.side == Side::Left;
      }
      const Side measured = right > left ? Side::Right : Side::Left;
      CHECK(gbz_side(gbz_curve(model, 80).samples) == measured);
    }
  }

  TEST_CASE("the 1D amoeba reduces to GBZ membership") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const auto& model : {builtin_hatano_nelson(0.5, 1.0), builtin_nh_ssh(0.6, 1.0, 0.3)}) {
      const CVector obc = sorted_eigenvalues(build_chain(model, 25, AxisBoundary::open()).matrix());
      std::vector<cplx> energies;
      for (Eigen::Index i = 0; i < obc.size() && energies.size() < 25; ++i)
        if (std::abs(obc[i]) > 1e-3) energies.push_back(obc[i].real());
      while (energies.size() < 50) energies.emplace_back(2.0 * u(rng), 0.1 + std::abs(u(rng)));
      int members = 0;
      for (const cplx& e : energies) {
        const auto m = gbz_membership(model, e);
        const auto a = amoeba_1d(model, e, 1e-6);
        CHECK(a.hole == !m.member);
        members += m.member;
        const auto roots = beta_roots(model, e);
        REQUIRE(roots.size() == a.log_moduli.size());
        for (std::size_t i = 0; i < roots.size(); ++i) CHECK(std::abs(a.log_moduli[i] - std::log(std::abs(roots[i]))) < 1e-12);
      }
      CHECK(members >= 20);
      CHECK(members <= 30);
    }
  }

  TEST_CASE("has_hole on synthetic rasters") {
    const auto annulus = synthetic_raster(40, [](int x, int y) {
      const double r = std::hypot(x - 19.5, y - 19.5);
      return r > 8 && r < 12;
    });
    CHECK(has_hole(annulus));
    CHECK_FALSE(has_hole(synthetic_raster(40, [](int, int) { return true; })));
    CHECK_FALSE(has_hole(synthetic_raster(40, [](int, int) { return false; })));
    // A 1-cell pinhole is below the default minimum.
    const auto pin = synthetic_raster(40, [](int x, int y) { return !(x == 20 && y == 20); });
    CHECK_FALSE(has_hole(pin));
    CHECK(has_hole(pin, 1));
  }

  TEST_CASE("2D amoeba membership") {
    const auto model = builtin_2d(0.5, 1.0, 0.2);
    const CVector e = sorted_eigenvalues(build(model, {20, 20}, BoundarySpec::uniform(2, AxisBoundary::open())).matrix());
    const cplx centre = e.mean();
    Eigen::Index at = 0;
    (e.array() - centre).abs().minCoeff(&at);
    CHECK(obc_member_2d(model, e[at]));
    CHECK_FALSE(obc_member_2d(model, e.real().maxCoeff() + 1.0));
    CHECK(has_hole(amoeba_points(builtin_2d(1, 1, 0), 10.0)));
  }

  TEST_CASE("amoeba is symmetric under x <-> y at J_L = J_R") {
    const auto raster = amoeba_points(builtin_2d(1.0, 1.0, 0.2), cplx(0.7, 0.3));
    int mismatch = 0;
    for (int ix = 0; ix < raster.resolution; ++ix)
      for (int iy = 0; iy < raster.resolution; ++iy) mismatch += raster.occupied(ix, iy) != raster.occupied(iy, ix);
    CHECK(raster.occupied_cells() > 1000);
    CHECK(mismatch < 0.03 * raster.occupied_cells());
  }

  TEST_CASE("amoeba exports") {
    AmoebaSampling s;
    s.resolution = 30;
    s.phase_samples = 60;
    s.keep_points = true;
    const auto raster = amoeba_points(builtin_2d(0.5, 1, 0.2), 0.0, s);
    std::ostringstream pgm, csv;
    write_amoeba_pgm(pgm, raster);
    CHECK(pgm.str().rfind("P5\n30 30\n255\n", 0) == 0);
    CHECK(pgm.str().size() == std::string("P5\n30 30\n255\n").size() + 900);
    write_amoeba_points_csv(csv, raster);
    CHECK(csv.str().rfind("r_x,log_abs_beta_y\n", 0) == 0);
    CHECK(!raster.points.empty());
  }
}
