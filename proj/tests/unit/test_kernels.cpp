#include <cmath>

#include "doctest.h"
#include "nhskin/kernels.hpp"

using namespace nhskin;

TEST_SUITE("kernels") {
  TEST_CASE("band scan: serial and parallel are identical") {
    for (const auto& m : {builtin_hatano_nelson(0.5, 1.0), builtin_nh_ssh(0.6, 1.0, 0.3)}) {
      const auto a = kernels::band_scan_serial(m, 4096);
      const auto b = kernels::band_scan_parallel(m, 4096);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }
  }

  TEST_CASE("winding grid: serial and parallel are identical") {
    std::vector<cplx> bases;
    for (int i = 0; i < 30; ++i)
      for (int j = 0; j < 10; ++j) bases.emplace_back(-2.0 + 4.0 * i / 29, -1.0 + 2.0 * j / 9);
    const auto m = builtin_nh_ssh(1.0, 1.0, 0.5);
    CHECK(kernels::winding_grid_serial(m, bases, 1e-6) == kernels::winding_grid_parallel(m, bases, 1e-6));
  }

  TEST_CASE("amoeba raster: serial and parallel are identical") {
    AmoebaSampling s;
    s.resolution = 120;
    s.phase_samples = 200;
    const auto poly = char_poly(builtin_2d(0.5, 1.0, 0.2), cplx(0.3, 0.1));
    const auto a = kernels::amoeba_raster_serial(poly, s);
    const auto b = kernels::amoeba_raster_parallel(poly, s);
    CHECK(a.occupancy == b.occupancy);
    CHECK(a.counts == b.counts);
    CHECK(a.branches == b.branches);
    CHECK(a.failed_samples == b.failed_samples);
  }

  TEST_CASE("GBZ line scan: serial and parallel are identical") {
    GbzScanOptions opts;
    opts.samples_per_line = 201;
    std::vector<kernels::ScanLine> lines;
    for (int i = 0; i < 21; ++i) {
      const double y = -0.6 + 1.2 * i / 20;
      lines.push_back({cplx(-1.6, y), cplx(1.6, y)});
      lines.push_back({cplx(y, -0.6), cplx(y, 0.6)});
    }
    const auto m = builtin_hatano_nelson(0.5, 1.0);
    const auto a = kernels::gbz_line_scan_serial(m, lines, opts);
    const auto b = kernels::gbz_line_scan_parallel(m, lines, opts);
    REQUIRE(a.size() == b.size());
    CHECK(!a.empty());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].beta == b[i].beta);
      CHECK(a[i].energy == b[i].energy);
    }
  }

  TEST_CASE("golden-section minimum") {
    const double x = kernels::golden_minimize([](double t) { return (t - 0.3) * (t - 0.3); }, -2.0, 2.0, 1e-10);
    CHECK(std::abs(x - 0.3) < 1e-8);
  }
}
