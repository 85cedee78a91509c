// Acceptance suite: one check per command-line criterion, each printing a
// single PASS/FAIL line with the measured quantities. Run without arguments
// to execute everything.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cutheat/analysis.hpp"
#include "cutheat/csv.hpp"
#include "cutheat/problems.hpp"

using namespace cutheat;

namespace {

int g_failures = 0;

void announce(int criterion, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// ---- criterion 1: dG(0) error convergence in the time step ----------------
void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  StudyOptions options;
  options.axis = SweepAxis::k;
  options.q = 0;
  options.mu = 0.6;
  options.fixed_h = 1e-3;
  options.first_point = 1;
  options.last_point = 15;
  options.fit_first = 1;
  options.fit_last = 15;
  const ConvergenceReport report = convergence_study(options);
  const bool ok = std::abs(report.slope - 1.0064) <= 0.10;
  announce(1, ok,
         "dG(0) k-sweep slope " + fmt(report.slope) + " (target 1.0064 +- 0.10, " +
             fmt(elapsed_seconds(start)) + " s)");
}

// ---- criterion 2: dG(0) error convergence in the mesh size ----------------
void criterion_2() {
  const auto start = std::chrono::steady_clock::now();
  StudyOptions options;
  options.axis = SweepAxis::h;
  options.q = 0;
  options.mu = 0.6;
  options.fixed_k = 1e-4;
  options.first_point = 1;
  options.last_point = 11;
  options.fit_first = 1;
  options.fit_last = 11;
  const ConvergenceReport report = convergence_study(options);
  const bool ok = std::abs(report.slope - 2.05) <= 0.10;
  announce(2, ok,
         "dG(0) h-sweep slope " + fmt(report.slope) + " (target 2.05 +- 0.10, " +
             fmt(elapsed_seconds(start)) + " s)");
}

// ---- criterion 3: dG(1) error convergence in the mesh size ----------------
void criterion_3() {
  const auto start = std::chrono::steady_clock::now();
  StudyOptions options;
  options.axis = SweepAxis::h;
  options.q = 1;
  options.mu = 0.6;
  options.fixed_k = 1e-3;
  options.first_point = 1;
  options.last_point = 15;
  options.fit_first = 1;
  options.fit_last = 15;
  const ConvergenceReport report = convergence_study(options);
  const bool ok = std::abs(report.slope - 2.00) <= 0.06;
  announce(3, ok,
         "dG(1) h-sweep slope " + fmt(report.slope) + " (target 2.00 +- 0.06, " +
             fmt(elapsed_seconds(start)) + " s)");
}

// ---- criterion 4: dG(1) superconvergence in the time step -----------------
//
// At any desk-scale mesh the spatial error floor (about C h^2, 2e-9 at
// h = 5e-5) swallows the k^3 regime of the deepest dyadic sweep points, so
// the fit is restricted to the floor-limited range: the last four points
// whose errors still sit at least 3x above the floor estimated from the
// deepest computed point.
void criterion_4() {
  const auto start = std::chrono::steady_clock::now();
  StudyOptions options;
  options.axis = SweepAxis::k;
  options.q = 1;
  options.mu = 0.6;
  options.fixed_h = 5e-5;
  options.first_point = 1;
  options.last_point = 9;
  options.fit_first = 1;
  options.fit_last = 9;
  const ConvergenceReport report = convergence_study(options);

  const double floor_estimate = report.rows.back().error;
  int last_clean = 0;
  for (const ConvergenceRow& row : report.rows) {
    if (row.error >= 3.0 * floor_estimate) last_clean = row.point;
  }
  bool ok = last_clean >= 4;
  double slope = 0.0;
  if (ok) {
    std::vector<std::pair<double, double>> pts;
    for (const ConvergenceRow& row : report.rows) {
      if (row.point > last_clean - 4 && row.point <= last_clean) {
        pts.emplace_back(row.axis_value, row.error);
      }
    }
    slope = lls_slope(pts, 1, static_cast<int>(pts.size()));
    ok = slope >= 2.6;
  }
  announce(4, ok,
           "dG(1) k-sweep slope " + fmt(slope) + " over floor-limited points " +
               std::to_string(last_clean - 3) + "-" +
               std::to_string(last_clean) + " at h = 5e-5 (target >= 2.6, floor " +
               fmt(floor_estimate) + ", " + fmt(elapsed_seconds(start)) + " s)");
}

// ---- criterion 5: operator property suite ---------------------------------
void criterion_5() {
  const auto start = std::chrono::steady_clock::now();
  const NitscheParams params;
  bool ok = true;
  std::string detail;

  auto cut_space = [](int cells, double a, double b) {
    const Mesh1D mesh0 = build_uniform_mesh(0.0, 1.0, cells);
    const int cells_g =
        std::max(1, static_cast<int>(std::lround((b - a) * cells)));
    return build_space(
        build_cut_config(mesh0, build_uniform_mesh(a, b, cells_g), {a, b}, 1));
  };

  SmoothFunction target;
  target.value = [](double x) {
    const double s = std::sin(std::numbers::pi * x);
    return s * s;
  };
  target.deriv = [](double x) {
    return std::numbers::pi * std::sin(2.0 * std::numbers::pi * x);
  };

  // Defining-equation residuals of all four operators on one generic config.
  {
    std::mt19937 rng(71);
    const BrokenSpace space_n = cut_space(40, 0.125, 0.375);
    const BrokenSpace space_m = cut_space(40, 0.1375, 0.3875);
    const SlabOperators ops_n(space_n, params);
    const SlabOperators ops_m(space_m, params);

    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(space_n.dim());
    for (double& x : v) x = dist(rng);

    const std::vector<double> p_rhs = l2_moments(space_n, target.value);
    const double p_res =
        backward_error(ops_n.mass(), ops_n.solve_mass(p_rhs), p_rhs);

    const std::vector<double> r_rhs = ritz_moments(space_n, target, params);
    const double r_res =
        backward_error(ops_n.stiffness(), ops_n.solve_stiffness(r_rhs), r_rhs);

    std::vector<double> lap_rhs = ops_n.stiffness().apply(v);
    for (double& x : lap_rhs) x = -x;
    const double d_res =
        backward_error(ops_n.mass(), ops_n.solve_mass(lap_rhs), lap_rhs);

    const std::vector<double> s_rhs =
        assemble_special(space_n, space_m, params).apply(v);
    const double s_res = backward_error(
        ops_m.stiffness(), ops_m.solve_stiffness(s_rhs), s_rhs);

    const double worst = std::max(std::max(p_res, r_res), std::max(d_res, s_res));
    if (worst > 1e-10) ok = false;
    detail += "residuals " + fmt(worst);
  }

  // Ritz error slopes over four dyadic levels.
  {
    std::vector<std::pair<double, double>> l2_pts;
    std::vector<std::pair<double, double>> energy_pts;
    const QuadRule rule = make_rule(RuleKind::gauss3);
    for (int cells : {20, 40, 80, 160}) {
      const BrokenSpace space = cut_space(cells, 0.125, 0.375);
      const SlabOperators ops(space, params);
      const std::vector<double> r = ops.ritz_project(target);

      double l2_sq = 0.0;
      double energy_sq = 0.0;
      auto add = [&](const Segment& seg, Side side) {
        const double g = space.eval_grad(r, seg.midpoint(), side);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const double x = seg.a + rule.nodes[q] * seg.length();
          const double dv = target.value(x) - space.eval(r, x, side);
          const double dg = target.deriv(x) - g;
          l2_sq += rule.weights[q] * seg.length() * dv * dv;
          energy_sq += rule.weights[q] * seg.length() * dg * dg;
        }
      };
      for (const Segment& seg : space.config().omega1) add(seg, Side::omega1);
      for (const Segment& seg : space.config().omega2) add(seg, Side::omega2);
      for (const Segment& seg : space.config().overlap) {
        const double d = space.eval_grad(r, seg.midpoint(), Side::omega1) -
                         space.eval_grad(r, seg.midpoint(), Side::omega2);
        energy_sq += seg.length() * d * d;
      }
      for (const GammaPoint& gp : space.config().gamma) {
        const int dir1 = gp.normal > 0 ? -1 : +1;
        const double avg =
            target.deriv(gp.x) -
            (params.omega1 * space.eval_grad(r, gp.x, Side::omega1, dir1) +
             params.omega2 * space.eval_grad(r, gp.x, Side::omega2, -dir1));
        const double jump = space.eval(r, gp.x, Side::omega1) -
                            space.eval(r, gp.x, Side::omega2);
        energy_sq += gp.h_k * avg * avg + jump * jump / gp.h_k;
      }
      l2_pts.emplace_back(1.0 / cells, std::sqrt(l2_sq));
      energy_pts.emplace_back(1.0 / cells, std::sqrt(energy_sq));
    }
    const double l2_slope = lls_slope(l2_pts, 1, 4);
    const double energy_slope = lls_slope(energy_pts, 1, 4);
    if (std::abs(l2_slope - 2.0) > 0.1) ok = false;
    if (std::abs(energy_slope - 1.0) > 0.1) ok = false;
    detail += ", ritz slopes " + fmt(l2_slope) + "/" + fmt(energy_slope);
  }

  // Shift-error constant across four dyadic levels.
  {
    std::mt19937 rng(91);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double c_min = 1e300;
    double c_max = 0.0;
    for (int cells : {10, 20, 40, 80}) {
      const double h = 1.0 / cells;
      const BrokenSpace space_n = cut_space(cells, 0.125, 0.375);
      const double delta = 0.5 * h;
      const BrokenSpace space_m =
          cut_space(cells, 0.125 + delta, 0.375 + delta);
      const SlabOperators ops_n(space_n, params);
      const SlabOperators ops_m(space_m, params);
      const SparseMatrix cm = cross_mass(space_m, space_n);
      double c_level = 0.0;
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> v(space_n.dim());
        for (double& x : v) x = dist(rng);
        const std::vector<double> sv = ops_m.shift_from(space_n, v);
        const double err_sq = dot(v, ops_n.mass().apply(v)) -
                              2.0 * dot(v, cm.apply(sv)) +
                              dot(sv, ops_m.mass().apply(sv));
        const double err = std::sqrt(std::max(0.0, err_sq));
        const double energy = energy_norm(space_n, v, params);
        if (energy > 0.0) c_level = std::max(c_level, err / (h * energy));
      }
      c_min = std::min(c_min, c_level);
      c_max = std::max(c_max, c_level);
    }
    if (c_max / c_min > 2.0) ok = false;
    detail += ", shift constant spread " + fmt(c_max / c_min);
  }

  announce(5, ok, detail + " (" + fmt(elapsed_seconds(start)) + " s)");
}

// ---- criterion 6: stability suite ------------------------------------------
void criterion_6() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (int q : {0, 1}) {
    StabilityOptions options;
    options.q = q;
    options.mu = 0.6;
    options.levels = 3;
    options.base_h = 1.0 / 16.0;
    options.base_k = 1.0 / 8.0;
    const std::vector<StabilityReport> reports =
        stability_probe(manufactured::initial(), options);

    double worst_decay = 0.0;
    for (const StabilityReport& r : reports) {
      worst_decay = std::max(worst_decay, r.decay_ratio());
    }
    if (worst_decay > 1.05) ok = false;

    // No implied constant may grow monotonically by more than 10 percent.
    auto monotone_growth = [](double a, double b, double c) {
      return b > a && c > b && c / a > 1.10;
    };
    const char* names[] = {"main", "basic", "strong"};
    double series[3][3];
    for (int level = 0; level < 3; ++level) {
      series[0][level] = reports[level].main_constant();
      series[1][level] = reports[level].basic_constant();
      series[2][level] = reports[level].strong_constant();
    }
    for (int s = 0; s < 3; ++s) {
      if (monotone_growth(series[s][0], series[s][1], series[s][2])) {
        ok = false;
        detail += std::string(" growth:") + names[s];
      }
    }
    detail += std::string(q == 0 ? " dG0" : " dG1") + " decay " +
              fmt(worst_decay) + " main " + fmt(series[0][2]);
  }
  announce(6, ok, "stability" + detail + " (" + fmt(elapsed_seconds(start)) + " s)");
}

// ---- criterion 7: exactness micro-suite ------------------------------------
void criterion_7() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;

  {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    std::uniform_real_distribution<double> weight(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const double wp = weight(rng);
      const auto [lhs, rhs] = jump_identity_check(val(rng), val(rng), val(rng),
                                                  val(rng), wp, 1.0 - wp);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    if (worst > 1e-12) ok = false;
    detail += "jump identity " + fmt(worst);
  }

  {
    const Interval unit{0.0, 1.0};
    const double integral =
        integrate([](double x) { return std::pow(x, 5); },
                  std::span<const Interval>(&unit, 1), make_rule(RuleKind::gauss3));
    const double err = std::abs(integral - 1.0 / 6.0);
    if (err > 1e-15) ok = false;
    detail += ", gauss3 degree-5 " + fmt(err);
  }

  {
    const NitscheParams params;
    std::mt19937 rng(555);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double worst_asym = 0.0;
    double min_ratio = 1e300;
    for (int cells : {10, 20, 40, 80}) {
      const Mesh1D mesh0 = build_uniform_mesh(0.0, 1.0, cells);
      const int cells_g = std::max(1, cells / 4);
      const BrokenSpace space = build_space(build_cut_config(
          mesh0, build_uniform_mesh(0.125, 0.375, cells_g), {0.125, 0.375}, 1));
      const SparseMatrix a = assemble_stiffness(space, params);
      worst_asym =
          std::max(worst_asym, a.max_asymmetry() / std::max(1.0, a.max_abs()));
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(space.dim());
        for (double& x : v) x = dist(rng);
        const double energy = energy_norm(space, v, params);
        if (energy == 0.0) continue;
        min_ratio =
            std::min(min_ratio, dot(v, a.apply(v)) / (energy * energy));
      }
    }
    if (worst_asym > 1e-12) ok = false;
    if (!(min_ratio > 0.0)) ok = false;
    detail += ", symmetry " + fmt(worst_asym) + ", coercivity ratio " +
              fmt(min_ratio);
  }

  announce(7, ok, detail + " (" + fmt(elapsed_seconds(start)) + " s)");
}

// ---- criterion 8: demo reproduction ----------------------------------------
void criterion_8() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail = "demo";

  for (int q : {0, 1}) {
    RunSetup setup;
    setup.mesh0 = build_uniform_mesh(0.0, 1.0, 21);       // 22 nodes
    setup.mesh_g_ref = build_uniform_mesh(0.125, 0.375, 6);  // 7 nodes
    setup.traj = InterfaceTrajectory::sampled(0.125, 0.25, [](double t) {
      return 0.5 * std::sin(2.0 * std::numbers::pi * t / 3.0);
    });
    setup.timeline = build_timeline(3.0, 10);
    setup.q = q;

    HeatProblem problem;
    problem.initial = manufactured::initial();
    problem.source = manufactured::source;

    MarchOptions opts;
    opts.keep_history = true;
    const Trajectory traj = march(setup, problem, opts);

    double sup = 0.0;
    for (int n = 1; n <= 10; ++n) {
      const BrokenSpace space = traj.space_at(n);
      const std::vector<double>& trace = traj.history[n - 1].node_coeffs.back();
      for (double x = 0.0; x <= 1.0; x += 1.0 / 256.0) {
        sup = std::max(sup, std::abs(space.eval(trace, x)));
      }
    }
    if (sup >= 1.1) ok = false;

    const std::string csv = solution_csv(traj);
    std::istringstream stream(csv);
    std::string line;
    std::getline(stream, line);
    if (line != "x,t,u") ok = false;
    int rows = 0;
    while (std::getline(stream, line)) {
      if (std::count(line.begin(), line.end(), ',') != 2) ok = false;
      ++rows;
    }
    // Ten slab snapshots with one sample per dof.
    if (rows < 10 * 10) ok = false;
    detail += std::string(" dG") + std::to_string(q) + " sup " + fmt(sup);
  }

  const double seconds = elapsed_seconds(start);
  if (seconds > 5.0) ok = false;
  announce(8, ok, detail + " (" + fmt(seconds) + " s)");
}

// ---- CLI behavior checks (shell out to the built binary) -------------------
int cli_checks(const std::string& binary) {
  int failures = 0;
  auto expect = [&](bool ok, const std::string& what) {
    std::printf("[%s] cli: %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++failures;
  };
  auto run = [&](const std::string& args) {
    const std::string cmd = binary + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  expect(run("demo --out /tmp/cutheat_demo.csv") == 0, "demo exits 0");
  const std::string dg0 = slurp("/tmp/cutheat_demo_dg0.csv");
  const std::string dg1 = slurp("/tmp/cutheat_demo_dg1.csv");
  expect(dg0.rfind("x,t,u\n", 0) == 0 && dg1.rfind("x,t,u\n", 0) == 0,
         "demo emits headed CSV for both dG orders");
  const std::string geom = slurp("/tmp/cutheat_demo_geometry.csv");
  expect(geom.rfind("n,t,g_left,g_right\n", 0) == 0, "demo writes geometry");

  expect(run("solve --problem zero --h0 0.1 --slabs 4 --out /tmp/cutheat_zero.csv") ==
             0,
         "zero solve exits 0");
  const std::string zero_csv = slurp("/tmp/cutheat_zero.csv");
  expect(zero_csv.find("final_error") == std::string::npos ||
             zero_csv.rfind("x,t,u\n", 0) == 0,
         "zero solve CSV headed");

  expect(run("solve --q 7") == 2, "invalid q exits 2");
  expect(run("frobnicate") == 2, "unknown command exits 2");
  expect(run("solve --mu 2.5 --t-final 1 --slabs 4") == 2,
         "interface leaving the domain exits 2");

  expect(run("solve --h0 0.1 --slabs 4 --out /tmp/cutheat_a.csv") == 0 &&
             run("solve --h0 0.1 --slabs 4 --out /tmp/cutheat_b.csv") == 0 &&
             slurp("/tmp/cutheat_a.csv") == slurp("/tmp/cutheat_b.csv") &&
             !slurp("/tmp/cutheat_a.csv").empty(),
         "identical configs give byte-identical output");

  std::ofstream cfg("/tmp/cutheat_cfg.txt");
  cfg << "# sample config\ncommand=solve\nh0=0.1\nslabs=4\nout=/tmp/cutheat_c.csv\n";
  cfg.close();
  expect(run("--config /tmp/cutheat_cfg.txt") == 0 &&
             slurp("/tmp/cutheat_c.csv") == slurp("/tmp/cutheat_a.csv"),
         "config file matches equivalent flags");

  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc >= 3 && std::strcmp(argv[1], "--cli-checks") == 0) {
    return cli_checks(argv[2]) == 0 ? 0 : 1;
  }

  int criterion = 0;
  if (argc >= 3 && std::strcmp(argv[1], "--criterion") == 0) {
    criterion = std::atoi(argv[2]);
  }

  using Fn = void (*)();
  const Fn checks[] = {criterion_1, criterion_2, criterion_3, criterion_4,
                       criterion_5, criterion_6, criterion_7, criterion_8};
  if (criterion >= 1 && criterion <= 8) {
    checks[criterion - 1]();
  } else {
    for (Fn fn : checks) fn();
  }
  return g_failures == 0 ? 0 : 1;
}
