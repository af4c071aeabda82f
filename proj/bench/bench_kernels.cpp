// Serial vs OpenMP timings for the data-parallel kernels.
//
//   bench_kernels [repeats]
//
// Each kernel runs `repeats` times per variant; the best wall time is kept and
// the two outputs are compared for exact equality.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include <omp.h>

#include "nhskin/kernels.hpp"
#include "nhskin/model.hpp"

using namespace nhskin;

namespace {

template <class F>
double best_seconds(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

bool same(const std::vector<CVector>& a, const std::vector<CVector>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].size() != b[i].size() || a[i] != b[i]) return false;
  return true;
}

bool same(const AmoebaRaster& a, const AmoebaRaster& b) {
  return a.occupancy == b.occupancy && a.counts == b.counts && a.branches == b.branches &&
         a.failed_samples == b.failed_samples;
}

bool same(const std::vector<GBZSample>& a, const std::vector<GBZSample>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].beta != b[i].beta || a[i].energy != b[i].energy) return false;
  return true;
}

template <class T>
bool same(const T& a, const T& b) {
  return a == b;
}

template <class Serial, class Parallel>
void run(const char* name, int repeats, Serial&& serial, Parallel&& parallel) {
  decltype(serial()) out_s, out_p;
  const double ts = best_seconds(repeats, [&] { out_s = serial(); });
  const double tp = best_seconds(repeats, [&] { out_p = parallel(); });
  std::printf("%-16s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  %s\n", name, ts, tp, ts / tp,
              same(out_s, out_p) ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("threads: %d, repeats: %d\n", omp_get_max_threads(), repeats);

  const auto hn = builtin_hatano_nelson(0.5, 1.0);
  const auto ssh = builtin_nh_ssh(1.0, 1.5, 0.3);
  const auto sq = builtin_2d(0.5, 1.0, 0.2);

  run("band_scan", repeats, [&] { return kernels::band_scan_serial(ssh, 1 << 17); },
      [&] { return kernels::band_scan_parallel(ssh, 1 << 17); });

  std::vector<cplx> bases;
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 20; ++j) bases.emplace_back(-2.0 + 4.0 * i / 39, -1.0 + 2.0 * j / 19);
  run("winding_grid", repeats, [&] { return kernels::winding_grid_serial(hn, bases, 1e-6); },
      [&] { return kernels::winding_grid_parallel(hn, bases, 1e-6); });

  AmoebaSampling sampling;
  const auto poly = char_poly(sq, cplx(0.0));
  run("amoeba_raster", repeats, [&] { return kernels::amoeba_raster_serial(poly, sampling); },
      [&] { return kernels::amoeba_raster_parallel(poly, sampling); });

  GbzScanOptions opts;
  std::vector<kernels::ScanLine> lines;
  for (int i = 0; i < 64; ++i) {
    const double y = -0.6 + 1.2 * i / 63;
    lines.push_back({cplx(-1.6, y), cplx(1.6, y)});
  }
  run("gbz_line_scan", repeats, [&] { return kernels::gbz_line_scan_serial(hn, lines, opts); },
      [&] { return kernels::gbz_line_scan_parallel(hn, lines, opts); });
  return 0;
}
