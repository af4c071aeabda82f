#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nhskin/error.hpp"
#include "nhskin/model.hpp"
#include "nhskin/polyroots.hpp"
#include "../oracles.hpp"

using namespace nhskin;

namespace {

CMatrix bloch1(const LatticeModel& m, double k) { return bloch(m, std::vector<double>{k}); }
CMatrix nonbloch1(const LatticeModel& m, cplx b) { return nonbloch(m, std::vector<cplx>{b}); }

std::vector<LatticeModel> zoo() {
  return {builtin_hatano_nelson(0.5, 1.0), builtin_hatano_nelson(1.0, 1.0), builtin_nh_ssh(1.0, 1.0, 0.5),
          builtin_nh_ssh(0.6, 1.0, 0.0), builtin_2d(0.5, 1.0, 0.2), builtin_2d(1.0, 1.0, 0.0)};
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("built-in Bloch values") {
    CHECK(std::abs(bloch1(builtin_hatano_nelson(0.5, 1.0), std::numbers::pi / 2)(0, 0) - cplx(0, -0.5)) < 1e-15);
    CHECK(std::abs(bloch1(builtin_hatano_nelson(1, 1), 0.0)(0, 0) - 2.0) < 1e-15);
    const CMatrix h = bloch1(builtin_nh_ssh(1, 1, 0.5), 0.0);
    CHECK(std::abs(h(0, 0)) < 1e-15);
    CHECK(std::abs(h(1, 1)) < 1e-15);
    CHECK(std::abs(h(0, 1) - 2.5) < 1e-15);
    CHECK(std::abs(h(1, 0) - 1.5) < 1e-15);
  }

  TEST_CASE("Hatano-Nelson dispersion matches the closed form") {
    const auto m = builtin_hatano_nelson(0.5, 1.0);
    for (int j = 0; j < 50; ++j) {
      const double k = -3.0 + 0.12 * j;
      CHECK(std::abs(bloch1(m, k)(0, 0) - oracle::hn_dispersion(0.5, 1.0, k)) < 1e-14);
    }
  }

  TEST_CASE("2D built-in H(beta) term by term") {
    const auto m = builtin_2d(0.5, 1.0, 0.2);
    const cplx bx(1.3, 0.4), by(-0.2, 0.9);
    const cplx expect = 0.5 * (bx + 1.0 / by) + 1.0 * (1.0 / bx + by) + 0.2 * (bx * by + bx / by + by / bx + 1.0 / (bx * by));
    CHECK(std::abs(nonbloch(m, std::vector<cplx>{bx, by})(0, 0) - expect) < 1e-13);
    const auto herm = builtin_2d(1, 1, 0);
    const double kx = 0.7, ky = -1.9;
    CHECK(std::abs(bloch(herm, std::vector<double>{kx, ky})(0, 0) - (2 * std::cos(kx) + 2 * std::cos(ky))) < 1e-14);
  }

  TEST_CASE("nonbloch examples and pole") {
    const auto m = builtin_hatano_nelson(0.5, 1.0);
    CHECK(std::abs(nonbloch1(m, 1.0)(0, 0) - 1.5) < 1e-15);
    CHECK(std::abs(nonbloch1(m, std::sqrt(2.0))(0, 0) - (0.5 * std::sqrt(2.0) + 1 / std::sqrt(2.0))) < 1e-14);
    CHECK_THROWS_AS(nonbloch1(m, 0.0), InvalidArgument);
  }

  TEST_CASE("bloch agrees with nonbloch on the unit circle and is 2pi periodic") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (const auto& m : zoo()) {
      for (int t = 0; t < 100; ++t) {
        std::vector<double> k(m.dimension());
        std::vector<cplx> beta(m.dimension());
        std::vector<double> shifted(m.dimension());
        for (int i = 0; i < m.dimension(); ++i) {
          k[i] = u(rng);
          beta[i] = std::polar(1.0, k[i]);
          shifted[i] = k[i] + (i == t % m.dimension() ? 2 * std::numbers::pi : 0.0);
        }
        const CMatrix hk = bloch(m, k);
        CHECK((hk - nonbloch(m, beta)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((hk - bloch(m, shifted)).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }

  TEST_CASE("Hermitian built-ins give Hermitian Bloch matrices") {
    for (const auto& m : {builtin_hatano_nelson(0.8, 0.8), builtin_nh_ssh(0.6, 1.0, 0.0)}) {
      for (int j = 0; j < 40; ++j) {
        const CMatrix h = bloch1(m, -3.1 + 0.155 * j);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
      }
    }
  }

  TEST_CASE("char_poly coefficient table") {
    const cplx e(0.3, -0.2);
    const auto p = char_poly(builtin_hatano_nelson(0.5, 1.0), e);
    CHECK(p.coefficients().size() == 3);
    CHECK(std::abs(p.coefficient({1}) + 0.5) < 1e-15);
    CHECK(std::abs(p.coefficient({0}) - e) < 1e-15);
    CHECK(std::abs(p.coefficient({-1}) + 1.0) < 1e-15);
    const auto p2 = char_poly(builtin_2d(0.5, 1, 0.2), 0.0);
    CHECK(p2.min_exponent(0) == -1);
    CHECK(p2.max_exponent(0) == 1);
    CHECK(p2.min_exponent(1) == -1);
    CHECK(p2.max_exponent(1) == 1);
  }

  TEST_CASE("char_poly evaluates det(E - H(beta))") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (const auto& m : zoo()) {
      for (int t = 0; t < 10; ++t) {
        const cplx e(u(rng), u(rng));
        std::vector<cplx> beta(m.dimension());
        for (auto& b : beta) b = std::polar(0.5 + std::abs(u(rng)), 2.0 * u(rng));
        const CMatrix a = e * CMatrix::Identity(m.bands(), m.bands()) - nonbloch(m, beta);
        const cplx det = a.determinant();
        const cplx val = char_poly(m, e).evaluate(beta);
        CHECK(std::abs(val - det) <= 1e-10 * std::max(1.0, std::abs(det)));
      }
    }
    // -det H(beta) = -(1.5 + 1/beta)(0.5 + beta) for NH-SSH(1, 1, 0.5) at E = 0.
    const cplx b(0.7, 0.4);
    CHECK(std::abs(char_poly(builtin_nh_ssh(1, 1, 0.5), 0.0).evaluate(std::vector<cplx>{b}) +
                   (1.5 + 1.0 / b) * (0.5 + b)) < 1e-13);
  }

  TEST_CASE("duplicate offsets merge and term order is irrelevant") {
    CMatrix a(1, 1), b(1, 1);
    a(0, 0) = 0.25;
    b(0, 0) = 1.0;
    const LatticeModel split(1, 1, {{{1}, a}, {{-1}, b}, {{1}, a}});
    const LatticeModel swapped(1, 1, {{{-1}, b}, {{1}, 2.0 * a}});
    REQUIRE(split.terms().size() == swapped.terms().size());
    for (std::size_t i = 0; i < split.terms().size(); ++i) {
      CHECK(split.terms()[i].offset == swapped.terms()[i].offset);
      CHECK(split.terms()[i].amplitude == swapped.terms()[i].amplitude);
    }
    CHECK(std::abs(bloch1(split, 0.3)(0, 0) - oracle::hn_dispersion(0.5, 1.0, 0.3)) < 1e-15);
  }

  TEST_CASE("construction rejects invalid input") {
    CMatrix one = CMatrix::Ones(1, 1);
    CHECK_THROWS_AS(LatticeModel(3, 1, {{{1, 0, 0}, one}}), InvalidArgument);
    CHECK_THROWS_AS(LatticeModel(1, 0, {{{1}, one}}), InvalidArgument);
    CHECK_THROWS_AS(LatticeModel(1, 1, {}), InvalidArgument);
    CHECK_THROWS_AS(LatticeModel(1, 1, {{{1, 0}, one}}), InvalidArgument);
    CHECK_THROWS_AS(LatticeModel(1, 2, {{{1}, one}}), InvalidArgument);
    CMatrix bad = one;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(LatticeModel(1, 1, {{{1}, bad}}), InvalidArgument);
    CHECK_THROWS_AS(LatticeModel(1, 1, {{{1}, CMatrix::Zero(1, 1)}}), InvalidArgument);
    CHECK_THROWS_AS(bloch(builtin_hatano_nelson(1, 1), std::vector<double>{0.1, 0.2}), InvalidArgument);
    CHECK_THROWS_AS(bloch1(builtin_hatano_nelson(1, 1), INFINITY), InvalidArgument);
  }
}

TEST_SUITE("polyroots") {
  TEST_CASE("Vieta relations for random polynomials") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int deg = 1; deg <= 8; ++deg) {
      std::vector<cplx> c(deg + 1);
      for (auto& x : c) x = cplx(g(rng), g(rng));
      const auto roots = poly_roots(c);
      REQUIRE(roots.size() == static_cast<std::size_t>(deg));
      cplx sum(0.0), prod(1.0);
      for (const auto& r : roots) {
        sum += r;
        prod *= r;
        CHECK(std::abs(poly_eval(c, r)) < 1e-10 * std::abs(c.back()) * std::pow(1 + std::abs(r), deg));
      }
      CHECK(std::abs(sum + c[deg - 1] / c[deg]) < 1e-9);
      CHECK(std::abs(prod - (deg % 2 ? -1.0 : 1.0) * c[0] / c[deg]) < 1e-9);
    }
  }

  TEST_CASE("quadratic without cancellation") {
    const std::vector<cplx> c{1.0, -1e8, 1.0};
    auto r = poly_roots(c);
    sort_by_modulus(r);
    CHECK(std::abs(r[0] - 1e-8) < 1e-22);
    CHECK(std::abs(r[1] - 1e8) < 1e-6);
  }

  TEST_CASE("sort_by_modulus breaks ties by argument") {
    std::vector<cplx> r{cplx(0, 1), cplx(2, 0), cplx(0, -1), cplx(-1, 0)};
    sort_by_modulus(r);
    CHECK(r[0] == cplx(0, -1));
    CHECK(r[1] == cplx(0, 1));
    CHECK(r[2] == cplx(-1, 0));
    CHECK(r[3] == cplx(2, 0));
  }

  TEST_CASE("degenerate input") {
    CHECK_THROWS_AS(poly_roots(std::vector<cplx>{1.0}), InvalidArgument);
    CHECK_THROWS_AS(poly_roots(std::vector<cplx>{1.0, 0.0}), DegeneratePolynomialError);
  }
}
