// nhskin: command-line front end for the skin-effect toolkit.
//
// Exit codes: 0 success, 1 computational failure, 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "nhskin/error.hpp"
#include "nhskin/io.hpp"
#include "nhskin/kernels.hpp"
#include "nhskin/linalg.hpp"
#include "nhskin/localization.hpp"
#include "nhskin/model.hpp"
#include "nhskin/model_io.hpp"
#include "nhskin/nonbloch.hpp"
#include "nhskin/realspace.hpp"
#include "nhskin/response.hpp"
#include "nhskin/spectral.hpp"
#include "nhskin/topology.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nhskin;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string builtin;
  std::string model_file;
  std::optional<double> jl, jr, t1, t2, gamma, tp;
  std::vector<int> sizes;
  std::string out_dir = "nhskin-out";
  std::vector<std::string> formats{"csv", "svg", "pgm"};
  std::vector<std::string> tol_overrides;

  double gap_tol = kDefaultGapTol;
  double gbz_tol = kDefaultGbzTol;
  double biorth_tol = 1e-8;
  double refine_tol = 1e-8;

  std::string base = "0";
  std::string grid;
  std::string energy = "0";
  std::string reference = "0";
  std::string omegas = "3,2+1i";
  std::vector<double> window{-3.0, 3.0, -3.0, 3.0};
  double eps = 1e-4;
  double eps_min = 1e-16, eps_max = 1.0;
  int eps_count = 65;
  double t_max = 40.0, dt = 0.05;
  double disorder = 0.0;
  std::uint64_t seed = 42;
  int n_seed = 400;
  int resolution = 300;
  int phases = 600;
  int min_hole = 4;
  int n_half = 30;
  int site = 5;
  int k_grid = 2048;
  int state = -1;
  bool vectors = false;
  bool points = false;
  bool scan = false;
  bool matrix = false;
};

// --- model and option plumbing ---

double require(const std::optional<double>& v, const char* flag, const std::string& builtin) {
  if (!v) throw UsageError("--builtin " + builtin + " requires " + flag);
  return *v;
}

LatticeModel resolve_model(const RunConfig& c) {
  if (!c.builtin.empty() && !c.model_file.empty())
    throw UsageError("give either --builtin or --model, not both");
  if (!c.model_file.empty()) return load_model_file(c.model_file);
  if (c.builtin.empty()) throw UsageError("a model is required: --builtin NAME or --model FILE");
  if (c.builtin == "hatano-nelson")
    return builtin_hatano_nelson(require(c.jl, "--jl", c.builtin), require(c.jr, "--jr", c.builtin));
  if (c.builtin == "nh-ssh")
    return builtin_nh_ssh(require(c.t1, "--t1", c.builtin), require(c.t2, "--t2", c.builtin),
                          require(c.gamma, "--gamma", c.builtin));
  if (c.builtin == "asym2d")
    return builtin_2d(require(c.jl, "--jl", c.builtin), require(c.jr, "--jr", c.builtin),
                      require(c.tp, "--tp", c.builtin));
  throw UsageError("unknown built-in '" + c.builtin + "' (hatano-nelson, nh-ssh, asym2d)");
}

void apply_tolerances(RunConfig& c) {
  for (const auto& item : c.tol_overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects NAME=VALUE, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError("--tol " + name + ": not a number");
    }
    if (!(value > 0.0)) throw UsageError("--tol " + name + " must be positive");
    if (name == "gap")
      c.gap_tol = value;
    else if (name == "gbz")
      c.gbz_tol = value;
    else if (name == "biorth")
      c.biorth_tol = value;
    else if (name == "refine")
      c.refine_tol = value;
    else
      throw UsageError("unknown tolerance '" + name + "' (gap, gbz, biorth, refine)");
  }
}

cplx complex_arg(const std::string& text, const char* flag) {
  try {
    return parse_complex(text);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

std::vector<cplx> complex_list(const std::string& text, const char* flag) {
  std::vector<cplx> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(complex_arg(item, flag));
  if (out.empty()) throw UsageError(std::string(flag) + " is empty");
  return out;
}

int size_1d(const RunConfig& c, int fallback) {
  if (c.sizes.empty()) return fallback;
  if (c.sizes.size() != 1) throw UsageError("this command takes a single size (-N)");
  return c.sizes[0];
}

std::vector<int> sizes_2d(const RunConfig& c, int fallback) {
  if (c.sizes.empty()) return {fallback, fallback};
  if (c.sizes.size() == 1) return {c.sizes[0], c.sizes[0]};
  if (c.sizes.size() != 2) throw UsageError("2D models take --sizes NX,NY");
  return c.sizes;
}

void require_dimension(const LatticeModel& m, int d, const std::string& cmd) {
  if (m.dimension() != d)
    throw UsageError(cmd + " needs a " + std::to_string(d) + "D model, got " + std::to_string(m.dimension()) + "D");
}

std::string side_name(Side s) { return to_string(s); }

// --- output directory with a record of every file written ---

class Output {
 public:
  Output(const RunConfig& c) : dir_(c.out_dir), formats_(c.formats.begin(), c.formats.end()) {}

  bool wants(const std::string& format) const {
    return std::find(formats_.begin(), formats_.end(), format) != formats_.end();
  }

  template <class Writer>
  void write(const std::string& name, Writer&& writer) {
    fs::create_directories(dir_);
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    writer(out);
    if (!out) throw std::runtime_error("write failed: " + path.string());
    files_.push_back(name);
  }

  const fs::path& dir() const { return dir_; }
  std::vector<std::string> files() const {
    auto f = files_;
    std::sort(f.begin(), f.end());
    return f;
  }

 private:
  fs::path dir_;
  std::vector<std::string> formats_;
  std::vector<std::string> files_;
};

// --- commands ---

void spectrum_svg(Output& out, const std::string& title, const CVector& pbc, const CVector& obc) {
  SvgSeries p{"PBC", "#9a9a9a", {}, {}, 1.5}, o{"OBC", "#d62728", {}, {}, 2.5};
  for (Eigen::Index i = 0; i < pbc.size(); ++i) {
    p.x.push_back(pbc[i].real());
    p.y.push_back(pbc[i].imag());
  }
  for (Eigen::Index i = 0; i < obc.size(); ++i) {
    o.x.push_back(obc[i].real());
    o.y.push_back(obc[i].imag());
  }
  out.write("spectrum.svg", [&](std::ostream& s) { write_svg_scatter(s, title, "Re E", "Im E", {p, o}); });
}

double directed_distance(const CVector& from, const CVector& to) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < from.size(); ++i) worst = std::max(worst, (to.array() - from[i]).abs().minCoeff());
  return worst;
}

void cmd_spectrum(const RunConfig& c, Output& out) {
  const auto model = resolve_model(c);
  CVector obc, pbc_curve, pbc;
  if (model.dimension() == 1) {
    const int n = size_1d(c, 100);
    const auto op = build_chain(model, n, AxisBoundary::open());
    const auto sys = eig_biorthogonal(op, c.biorth_tol);
    obc = sys.eigenvalues;
    pbc = sorted_eigenvalues(build_chain(model, n, AxisBoundary::periodic()).matrix());
    const auto bands = kernels::band_scan_parallel(model, c.k_grid);
    pbc_curve.resize(static_cast<Eigen::Index>(bands.size()) * model.bands());
    for (std::size_t j = 0; j < bands.size(); ++j)
      for (int b = 0; b < model.bands(); ++b) pbc_curve[j * model.bands() + b] = bands[j][b];
    if (out.wants("csv")) {
      out.write("obc_spectrum.csv", [&](std::ostream& s) { write_spectrum_csv(s, sys, c.vectors); });
      out.write("pbc_curve.csv", [&](std::ostream& s) {
        s << "k,band,re,im\n";
        for (std::size_t j = 0; j < bands.size(); ++j) {
          const double k = -std::numbers::pi + 2.0 * std::numbers::pi * j / c.k_grid;
          for (int b = 0; b < model.bands(); ++b)
            s << format_double(k) << ',' << b << ',' << format_double(bands[j][b].real()) << ','
              << format_double(bands[j][b].imag()) << '\n';
        }
      });
      if (c.matrix) out.write("obc_matrix.csv", [&](std::ostream& s) { write_matrix_csv(s, op); });
    }
    std::cout << "kappa_V: " << format_double(sys.kappa_v) << "\n";
  } else {
    const auto sizes = sizes_2d(c, 20);
    const auto op = build(model, sizes, BoundarySpec::uniform(2, AxisBoundary::open()));
    obc = sorted_eigenvalues(op.matrix());
    pbc = sorted_eigenvalues(build(model, sizes, BoundarySpec::uniform(2, AxisBoundary::periodic())).matrix());
    pbc_curve = pbc;
    if (out.wants("csv")) {
      auto dump = [](std::ostream& s, const CVector& e) {
        s << "index,re,im\n";
        for (Eigen::Index i = 0; i < e.size(); ++i)
          s << i << ',' << format_double(e[i].real()) << ',' << format_double(e[i].imag()) << '\n';
      };
      out.write("obc_spectrum.csv", [&](std::ostream& s) { dump(s, obc); });
      if (c.matrix) out.write("obc_matrix.csv", [&](std::ostream& s) { write_matrix_csv(s, op); });
    }
  }
  if (out.wants("csv"))
    out.write("pbc_spectrum.csv", [&](std::ostream& s) {
      s << "index,re,im\n";
      for (Eigen::Index i = 0; i < pbc.size(); ++i)
        s << i << ',' << format_double(pbc[i].real()) << ',' << format_double(pbc[i].imag()) << '\n';
    });
  if (out.wants("svg")) spectrum_svg(out, model.name() + " spectrum", pbc_curve, obc);

  const RVector re = pbc_curve.real(), im = pbc_curve.imag();
  std::cout << "obc eigenvalues: " << obc.size() << "\n"
            << "max |Im E| (obc): " << format_double(obc.imag().cwiseAbs().maxCoeff()) << "\n"
            << "pbc semi-axes: re " << format_double(0.5 * (re.maxCoeff() - re.minCoeff())) << ", im "
            << format_double(0.5 * (im.maxCoeff() - im.minCoeff())) << "\n"
            << "hausdorff(obc, pbc): " << format_double(linalg::hausdorff(obc, pbc)) << "\n"
            << "max distance obc -> pbc curve: " << format_double(directed_distance(obc, pbc_curve)) << "\n";
}

void cmd_winding(const RunConfig& c, Output& out) {
  const auto model = resolve_model(c);
  require_dimension(model, 1, "winding");
  if (!c.grid.empty()) {
    std::vector<double> g;
    std::stringstream ss(c.grid);
    std::string item;
    while (std::getline(ss, item, ',')) g.push_back(std::stod(item));
    if (g.size() != 6 || g[4] < 1 || g[5] < 1)
      throw UsageError("--grid expects RE0,RE1,IM0,IM1,NX,NY");
    const int nx = static_cast<int>(g[4]), ny = static_cast<int>(g[5]);
    std::vector<cplx> bases;
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        bases.emplace_back(nx == 1 ? g[0] : g[0] + (g[1] - g[0]) * i / (nx - 1),
                           ny == 1 ? g[2] : g[2] + (g[3] - g[2]) * j / (ny - 1));
    const auto w = winding_grid(model, bases, c.gap_tol);
    if (out.wants("csv")) out.write("winding.csv", [&](std::ostream& s) { write_winding_csv(s, bases, w); });
    std::map<std::string, int> tally;
    for (const auto& v : w) ++tally[v ? std::to_string(*v) : "gap"];
    for (const auto& [k, n] : tally) std::cout << "w = " << k << ": " << n << " base points\n";
    return;
  }
  const cplx base = complex_arg(c.base, "--base");
  const auto r = winding_number(model, base, c.gap_tol);
  if (out.wants("csv"))
    out.write("winding.csv", [&](std::ostream& s) { write_winding_csv(s, {base}, {r.w}); });
  std::cout << "w = " << r.w << "\n"
            << "raw integral: " << format_complex(r.raw_integral) << "\n"
            << "k samples: " << r.k_samples_used << "\n"
            << "predicted skin side: " << side_name(predict_skin_side(r)) << "\n";
}

void cmd_gbz(const RunConfig& c, Output& out) {
  const auto model = resolve_model(c);
  require_dimension(model, 1, "gbz");
  const auto curve = gbz_curve(model, c.n_seed, c.refine_tol, c.gbz_tol);
  double lo = INFINITY, hi = 0.0, off_unit = 0.0;
  for (const auto& s : curve.samples) {
    const double m = std::abs(s.beta);
    lo = std::min(lo, m);
    hi = std::max(hi, m);
    off_unit = std::max(off_unit, std::abs(m - 1.0));
  }
  if (out.wants("csv")) {
    out.write("gbz.csv", [&](std::ostream& s) { write_gbz_csv(s, curve.samples); });
    if (c.scan) {
      GbzScanOptions opt;
      opt.gbz_tol = c.gbz_tol;
      const auto scan = gbz_energy_scan(model, opt);
      out.write("gbz_scan.csv", [&](std::ostream& s) { write_gbz_csv(s, scan); });
    }
  }
  if (out.wants("svg")) {
    SvgSeries unit{"|beta| = 1", "#bbbbbb", {}, {}, 1.0}, pts{"GBZ", "#1f77b4", {}, {}, 2.0};
    for (int j = 0; j < 360; ++j) {
      unit.x.push_back(std::cos(j * std::numbers::pi / 180));
      unit.y.push_back(std::sin(j * std::numbers::pi / 180));
    }
    for (const auto& s : curve.samples) {
      pts.x.push_back(s.beta.real());
      pts.y.push_back(s.beta.imag());
    }
    out.write("gbz.svg", [&](std::ostream& s) {
      write_svg_scatter(s, model.name() + " generalized Brillouin zone", "Re beta", "Im beta", {unit, pts});
    });
  }
  std::cout << "samples: " << curve.samples.size() << " (" << curve.failed_seeds.size() << " of "
            << curve.seeds << " seeds rejected)\n"
            << "|beta| range: [" << format_double(lo) << ", " << format_double(hi) << "]\n"
            << "max ||beta| - 1|: " << format_double(off_unit) << "\n"
            << "side: " << side_name(gbz_side(curve.samples)) << "\n";
}

void cmd_amoeba(const RunConfig& c, Output& out) {
  const auto model = resolve_model(c);
  require_dimension(model, 2, "amoeba");
  if (c.window.size() != 4) throw UsageError("--window expects RX0,RX1,RY0,RY1");
  AmoebaSampling s;
  s.window = {c.window[0], c.window[1], c.window[2], c.window[3]};
  s.resolution = c.resolution;
  s.phase_samples = c.phases;
  s.keep_points = c.points && out.wants("csv");
  const cplx e = complex_arg(c.energy, "--energy");
  const auto raster = amoeba_points(model, e, s);
  const bool hole = has_hole(raster, c.min_hole);
  if (out.wants("pgm")) {
    out.write("amoeba.pgm", [&](std::ostream& o) { write_amoeba_pgm(o, raster); });
    for (std::size_t a = 0; a < raster.branches.size(); ++a)
      out.write("amoeba_branch_" + std::to_string(a) + ".pgm",
                [&](std::ostream& o) { write_pgm(o, raster.resolution, raster.resolution, raster.branches[a]); });
  }
  if (s.keep_points) out.write("amoeba_points.csv", [&](std::ostream& o) { write_amoeba_points_csv(o, raster); });
  if (out.wants("svg")) {
    std::vector<double> v(raster.occupancy.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = raster.occupancy[k] ? 1.0 : 0.0;
    out.write("amoeba.svg", [&](std::ostream& o) {
      write_svg_heatmap(o, "amoeba at E = " + format_complex(e), raster.resolution, raster.resolution, v);
    });
  }
  std::cout << "hole: " << (hole ? "true" : "false") << "\n"
            << "obc member: " << (hole ? "false" : "true") << "\n"
            << "occupied cells: " << raster.occupied_cells() << " of "
            << raster.resolution * raster.resolution << "\n"
            << "failed samples: " << raster.failed_samples << " of " << raster.samples << "\n";
}

void cmd_localize(const RunConfig& c, Output& out) {
  const auto model = resolve_model(c);
  require_dimension(model, 1, "localize");
  const int n = size_1d(c, 50);
  auto op = build_chain(model, n, AxisBoundary::open());
  if (c.disorder > 0.0) op = add_onsite_disorder(op, c.disorder, c.seed);
  const auto sys = eig_biorthogonal(op, c.biorth_tol);
  std::map<std::string, int> tally;
  std::map<std::string, int> sides;
  std::ostringstream table;
  table << "index,re,im,label,side,right_edge_fraction,pr_scaled\n";
  for (int i = 0; i < sys.size(); ++i) {
    std::string label, side, edge = "", pr = "";
    try {
      const auto cls = classify_state(sys.left.col(i), sys.right.col(i), op);
      label = to_string(cls.label);
      side = side_name(cls.side);
      edge = format_double(cls.right_edge_fraction);
      pr = format_double(cls.biorthogonal_pr_scaled);
      ++sides[side];
    } catch (const EpVicinityError&) {
      label = "refused";
      side = "none";
    }
    ++tally[label];
    table << i << ',' << format_double(sys.eigenvalues[i].real()) << ','
          << format_double(sys.eigenvalues[i].imag()) << ',' << label << ',' << side << ',' << edge << ','
          << pr << '\n';
  }
  int chosen = c.state;
  if (chosen < 0) {
    Eigen::Index at = 0;
    sys.eigenvalues.cwiseAbs().minCoeff(&at);
    chosen = static_cast<int>(at);
  }
  if (chosen >= sys.size()) throw UsageError("--state out of range");
  const CVector l = sys.left.col(chosen), r = sys.right.col(chosen);
  const auto pr = density_profile(r, op.index(), ProfileKind::Right);
  const auto pl = density_profile(l, op.index(), ProfileKind::Left);
  std::optional<SiteProfile> pb;
  try {
    pb = biorthogonal_density(l, r, op.index());
  } catch (const EpVicinityError&) {
  }
  if (out.wants("csv")) {
    out.write("classes.csv", [&](std::ostream& s) { s << table.str(); });
    out.write("profile_right.csv", [&](std::ostream& s) { write_profile_csv(s, pr); });
    out.write("profile_left.csv", [&](std::ostream& s) { write_profile_csv(s, pl); });
    if (pb) out.write("profile_biorthogonal.csv", [&](std::ostream& s) { write_profile_csv(s, *pb); });
  }
  if (out.wants("svg")) {
    std::vector<SvgSeries> series{{"right", "#d62728", {}, {}, 2.0}, {"left", "#1f77b4", {}, {}, 2.0}};
    if (pb) series.push_back({"|biorthogonal|", "#2ca02c", {}, {}, 2.0});
    for (int i = 0; i < pr.sites(); ++i) {
      series[0].x.push_back(i);
      series[0].y.push_back(pr.weights[i].real());
      series[1].x.push_back(i);
      series[1].y.push_back(pl.weights[i].real());
      if (pb) {
        series[2].x.push_back(i);
        series[2].y.push_back(std::abs(pb->weights[i]));
      }
    }
    out.write("profiles.svg", [&](std::ostream& s) {
      write_svg_scatter(s, "state " + std::to_string(chosen) + " at E = " + format_complex(sys.eigenvalues[chosen]),
                        "cell", "weight", series);
    });
  }
  for (const char* k : {"skin", "topological", "bulk", "refused"})
    std::cout << k << ": " << tally[k] << "\n";
  std::string majority = "none";
  int best = 0;
  for (const auto& [s, count] : sides)
    if (count > best) best = count, majority = s;
  std::cout << "majority side: " << majority << "\n"
            << "profiled state: " << chosen << " (E = " << format_complex(sys.eigenvalues[chosen]) << ")\n";
}

void cmd_funnel(const RunConfig& c, Output& out) {
  if (!c.jl || !c.jr) throw UsageError("funnel requires --jl and --jr");
  const auto op = funnel_model(*c.jl, *c.jr, c.n_half);
  if (c.site < 0 || c.site >= op.size()) throw UsageError("--site out of range");
  CVector psi = CVector::Zero(op.size());
  psi[c.site] = 1.0;
  const auto traj = time_evolve(op, psi, c.t_max, c.dt);
  const RVector final_density = state_density(traj.states.back(), op.index());
  const double near = final_density.segment(c.n_half - 5, 10).sum();
  double growth = 0.0;
  for (double g : traj.log_growth) growth += g;
  if (out.wants("csv")) {
    out.write("trajectory.csv", [&](std::ostream& s) { write_trajectory_csv(s, traj, op.index()); });
    out.write("matrix.csv", [&](std::ostream& s) { write_matrix_csv(s, op); });
  }
  if (out.wants("svg")) {
    // Space-time heatmap thinned to at most 200 time rows.
    const int stride = std::max<int>(1, static_cast<int>(traj.times.size()) / 200);
    std::vector<int> rows;
    for (std::size_t k = 0; k < traj.times.size(); k += stride) rows.push_back(static_cast<int>(k));
    const int w = op.size(), h = static_cast<int>(rows.size());
    std::vector<double> v(static_cast<std::size_t>(w) * h);
    for (int iy = 0; iy < h; ++iy) {
      const RVector d = state_density(traj.states[rows[iy]], op.index());
      for (int ix = 0; ix < w; ++ix) v[static_cast<std::size_t>(ix) * h + iy] = d[ix];
    }
    out.write("funnel.svg", [&](std::ostream& s) { write_svg_heatmap(s, "density (site vs time)", w, h, v); });
  }
  std::cout << "interface fraction (10 sites around the junction): " << format_double(near) << "\n"
            << "total log growth: " << format_double(growth) << "\n";
}

void cmd_sensor(const RunConfig& c, Output& out) {
  const auto model = resolve_model(c);
  require_dimension(model, 1, "sensor");
  const std::vector<int> sizes = c.sizes.empty() ? std::vector<int>{10, 14, 18, 22} : c.sizes;
  const auto pts = sensor_sweep(model, c.eps, sizes, complex_arg(c.reference, "--reference"));
  if (out.wants("csv")) out.write("sensor.csv", [&](std::ostream& s) { write_sensor_csv(s, pts); });
  for (const auto& p : pts) std::cout << "N = " << p.n << ": delta_E = " << format_double(p.delta_e) << "\n";
  bool all_positive = std::all_of(pts.begin(), pts.end(), [](const auto& p) { return p.delta_e > 0.0; });
  if (pts.size() >= 2 && all_positive)
    std::cout << "slope d ln(delta_E) / dN: " << format_double(sensor_slope(pts)) << "\n";
  else
    std::cout << "slope d ln(delta_E) / dN: undefined\n";
}

void cmd_crossover(const RunConfig& c, Output& out) {
  const auto model = resolve_model(c);
  require_dimension(model, 1, "crossover");
  if (!(c.eps_min > 0.0) || !(c.eps_max >= c.eps_min) || c.eps_count < 2)
    throw UsageError("need 0 < --eps-min <= --eps-max and --eps-count >= 2");
  std::vector<double> eps;
  for (int k = 0; k < c.eps_count; ++k)
    eps.push_back(std::exp(std::log(c.eps_min) + (std::log(c.eps_max) - std::log(c.eps_min)) * k / (c.eps_count - 1)));
  const auto pts = boundary_crossover(model, size_1d(c, 40), eps);
  bool monotone = true;
  for (std::size_t i = 1; i < pts.size(); ++i)
    monotone = monotone && pts[i].distance_to_obc >= pts[i - 1].distance_to_obc - 1e-9;
  if (out.wants("csv")) out.write("crossover.csv", [&](std::ostream& s) { write_crossover_csv(s, pts); });
  if (out.wants("svg")) {
    SvgSeries d{"Hausdorff to OBC", "#d62728", {}, {}, 2.5}, m{"max |Im E|", "#1f77b4", {}, {}, 2.0};
    for (const auto& p : pts) {
      d.x.push_back(std::log10(p.epsilon));
      d.y.push_back(p.distance_to_obc);
      m.x.push_back(std::log10(p.epsilon));
      m.y.push_back(p.max_imag);
    }
    out.write("crossover.svg", [&](std::ostream& s) {
      write_svg_scatter(s, model.name() + " end coupling", "log10 epsilon", "distance", {d, m});
    });
  }
  std::cout << "eps*: " << format_double(crossover_epsilon(pts)) << "\n"
            << "monotone: " << (monotone ? "true" : "false") << "\n"
            << "distance at eps = " << format_double(pts.back().epsilon) << ": "
            << format_double(pts.back().distance_to_obc) << "\n";
}

void cmd_reciprocity(const RunConfig& c, Output& out) {
  const auto model = resolve_model(c);
  RealSpaceOperator op = model.dimension() == 1
                             ? build_chain(model, size_1d(c, 20), AxisBoundary::open())
                             : build(model, sizes_2d(c, 8), BoundarySpec::uniform(2, AxisBoundary::open()));
  const auto omegas = complex_list(c.omegas, "--omegas");
  std::vector<double> asym;
  for (const cplx& w : omegas) asym.push_back(susceptibility(op, w).asymmetry);
  const auto r = reciprocity_test(op, omegas);
  if (out.wants("csv"))
    out.write("reciprocity.csv", [&](std::ostream& s) {
      s << "re_omega,im_omega,asymmetry\n";
      for (std::size_t i = 0; i < omegas.size(); ++i)
        s << format_double(omegas[i].real()) << ',' << format_double(omegas[i].imag()) << ','
          << format_double(asym[i]) << '\n';
    });
  std::cout << "reciprocal: " << (r.reciprocal ? "true" : "false") << "\n"
            << "max asymmetry: " << format_double(r.max_asymmetry) << "\n"
            << "non-normality: " << format_double(non_normality(op)) << "\n";
}

json manifest(const RunConfig& c, const std::vector<std::string>& args, const Output& out) {
  json cfg;
  cfg["command"] = c.command;
  if (!c.builtin.empty()) cfg["builtin"] = c.builtin;
  if (!c.model_file.empty()) cfg["model_file"] = c.model_file;
  auto opt = [&](const char* k, const std::optional<double>& v) {
    if (v) cfg[k] = *v;
  };
  opt("jl", c.jl);
  opt("jr", c.jr);
  opt("t1", c.t1);
  opt("t2", c.t2);
  opt("gamma", c.gamma);
  opt("tp", c.tp);
  cfg["sizes"] = c.sizes;
  cfg["formats"] = c.formats;
  cfg["options"] = {{"base", c.base},         {"grid", c.grid},           {"energy", c.energy},
                    {"reference", c.reference}, {"omegas", c.omegas},       {"window", c.window},
                    {"eps", c.eps},             {"eps_min", c.eps_min},     {"eps_max", c.eps_max},
                    {"eps_count", c.eps_count}, {"t_max", c.t_max},         {"dt", c.dt},
                    {"disorder", c.disorder},   {"n_seed", c.n_seed},       {"resolution", c.resolution},
                    {"phases", c.phases},       {"min_hole", c.min_hole},   {"n_half", c.n_half},
                    {"site", c.site},           {"k_grid", c.k_grid},       {"state", c.state},
                    {"vectors", c.vectors},     {"points", c.points},       {"scan", c.scan},
                    {"matrix", c.matrix}};
  cfg["tolerances"] = {{"gap", c.gap_tol}, {"gbz", c.gbz_tol}, {"biorth", c.biorth_tol}, {"refine", c.refine_tol}};
  json m;
  m["tool"] = "nhskin";
  m["version"] = kVersion;
  m["libraries"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                  std::to_string(EIGEN_MINOR_VERSION)},
                    {"cli11", CLI11_VERSION}};
  m["argv"] = args;
  m["config"] = cfg;
  m["seeds"] = {{"disorder", c.seed}};
  m["outputs"] = out.files();
  return m;
}

void add_model_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--builtin", c.builtin, "built-in model: hatano-nelson | nh-ssh | asym2d");
  sub->add_option("--model", c.model_file, "JSON model file");
  sub->add_option("--jl", c.jl, "left hopping J_L");
  sub->add_option("--jr", c.jr, "right hopping J_R");
  sub->add_option("--t1", c.t1, "NH-SSH intra-cell hopping");
  sub->add_option("--t2", c.t2, "NH-SSH inter-cell hopping");
  sub->add_option("--gamma", c.gamma, "NH-SSH asymmetry");
  sub->add_option("--tp", c.tp, "2D diagonal hopping t'");
}

void add_common_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("-N,--sizes", c.sizes, "cells per axis (comma separated)")->delimiter(',');
  sub->add_option("--out", c.out_dir, "output directory")->capture_default_str();
  sub->add_option("--format", c.formats, "output formats: csv,svg,pgm")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "svg", "pgm"}));
  sub->add_option("--tol", c.tol_overrides, "tolerance override NAME=VALUE (gap, gbz, biorth, refine)");
}

void configure_threads() {
  const char* env = std::getenv("NHSKIN_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw UsageError("NHSKIN_THREADS must be a positive integer");
  omp_set_num_threads(static_cast<int>(n));
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Non-Hermitian skin-effect analysis"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    void (*run)(const RunConfig&, Output&);
  };
  const std::vector<Command> commands{
      {"spectrum", "OBC and PBC spectra", cmd_spectrum},
      {"winding", "spectral winding number at a base energy (or on a grid)", cmd_winding},
      {"gbz", "generalized Brillouin zone", cmd_gbz},
      {"amoeba", "2D amoeba raster and hole test", cmd_amoeba},
      {"localize", "classify OBC eigenstates (skin / topological / bulk)", cmd_localize},
      {"funnel", "wave-packet dynamics on a funnel junction", cmd_funnel},
      {"sensor", "boundary-state shift under end coupling versus size", cmd_sensor},
      {"crossover", "OBC-to-PBC spectral crossover in the end coupling", cmd_crossover},
      {"reciprocity", "susceptibility asymmetry and non-normality", cmd_reciprocity},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : commands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    add_model_options(sub, c);
    add_common_options(sub, c);
    subs[cmd.name] = sub;
  }
  subs["spectrum"]->add_flag("--vectors", c.vectors, "add |psi| columns to the OBC spectrum CSV");
  subs["spectrum"]->add_flag("--matrix", c.matrix, "write the OBC matrix as CSV triplets");
  subs["spectrum"]->add_option("--k-grid", c.k_grid, "PBC curve samples")->check(CLI::PositiveNumber);
  subs["winding"]->add_option("--base", c.base, "base energy a+bi");
  subs["winding"]->add_option("--grid", c.grid, "base-point grid RE0,RE1,IM0,IM1,NX,NY");
  subs["gbz"]->add_option("--n-seed", c.n_seed, "OBC size used to seed the curve");
  subs["gbz"]->add_flag("--scan", c.scan, "also write the line-scan GBZ energy set");
  subs["amoeba"]->add_option("--energy", c.energy, "energy a+bi");
  subs["amoeba"]->add_option("--resolution", c.resolution, "raster cells per axis");
  subs["amoeba"]->add_option("--phases", c.phases, "phase samples per r_x");
  subs["amoeba"]->add_option("--window", c.window, "RX0,RX1,RY0,RY1")->delimiter(',');
  subs["amoeba"]->add_option("--min-hole", c.min_hole, "smallest hole in cells");
  subs["amoeba"]->add_flag("--points", c.points, "write the raw point cloud CSV");
  subs["localize"]->add_option("--state", c.state, "state index to profile (default: smallest |E|)");
  subs["localize"]->add_option("--disorder", c.disorder, "onsite disorder strength");
  subs["localize"]->add_option("--seed", c.seed, "disorder seed");
  subs["funnel"]->add_option("--n-half", c.n_half, "sites per half chain");
  subs["funnel"]->add_option("--site", c.site, "initial site (0-based)");
  subs["funnel"]->add_option("--t-max", c.t_max, "final time");
  subs["funnel"]->add_option("--dt", c.dt, "time step");
  subs["sensor"]->add_option("--eps", c.eps, "end coupling");
  subs["sensor"]->add_option("--reference", c.reference, "target energy a+bi");
  subs["crossover"]->add_option("--eps-min", c.eps_min, "smallest coupling");
  subs["crossover"]->add_option("--eps-max", c.eps_max, "largest coupling");
  subs["crossover"]->add_option("--eps-count", c.eps_count, "log-spaced couplings");
  subs["reciprocity"]->add_option("--omegas", c.omegas, "probe frequencies a+bi,...");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    configure_threads();
    apply_tolerances(c);
    const Command* chosen = nullptr;
    for (const auto& cmd : commands)
      if (subs[cmd.name]->parsed()) chosen = &cmd;
    c.command = chosen->name;
    Output out(c);
    chosen->run(c, out);
    out.write("manifest.json", [&](std::ostream& s) { s << manifest(c, args, out).dump(2) << '\n'; });
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const ComputationError& e) {
    std::cerr << "computation failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
