#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include <CLI11.hpp>

#include "cutheat/csv.hpp"
#include "cutheat/problems.hpp"

namespace {

using namespace cutheat;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CliConfig {
  std::string command;
  double t_final = 1.0;
  int slabs = 10;
  double k = 0.0;  // overrides slabs when positive
  double h0 = 0.05;
  double hg = 0.0;  // defaults to h0
  double g_start = 0.125;
  double g_length = 0.25;
  std::string mu = "0.6";
  double gamma = 10.0;
  int q = 0;
  std::string sweep = "k";
  std::string points;        // fit range "a-b"
  std::string sweep_points;  // run range "a-b"
  double fixed_h = 1e-3;
  double fixed_k = 1e-4;
  std::string problem = "manufactured";
  int levels = 3;
  double base_h = 1.0 / 16.0;
  double base_k = 1.0 / 8.0;
  int threads = 0;
  double tol = 1e-10;
  std::string out = "out.csv";
};

std::pair<int, int> parse_range(const std::string& text, const char* field) {
  const auto dash = text.find('-');
  if (dash == std::string::npos) {
    throw CLI::ValidationError(field, "expected a range like 1-15");
  }
  try {
    const int first = std::stoi(text.substr(0, dash));
    const int last = std::stoi(text.substr(dash + 1));
    if (first < 1 || last < first) {
      throw CLI::ValidationError(field, "expected 1 <= first <= last");
    }
    return {first, last};
  } catch (const std::invalid_argument&) {
    throw CLI::ValidationError(field, "expected integers like 1-15");
  }
}

double parse_mu(const std::string& text) {
  try {
    std::size_t used = 0;
    const double mu = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return mu;
  } catch (const std::exception&) {
    throw CLI::ValidationError("--mu", "expected a number or demo-sine");
  }
}

InterfaceTrajectory make_trajectory(const CliConfig& cfg) {
  if (cfg.mu == "demo-sine") {
    return InterfaceTrajectory::sampled(cfg.g_start, cfg.g_length, [](double t) {
      return 0.5 * std::sin(2.0 * std::numbers::pi * t / 3.0);
    });
  }
  return InterfaceTrajectory::constant(cfg.g_start, cfg.g_length,
                                       parse_mu(cfg.mu));
}

RunSetup make_setup(const CliConfig& cfg) {
  const double hg = cfg.hg > 0.0 ? cfg.hg : cfg.h0;
  int slabs = cfg.slabs;
  if (cfg.k > 0.0) {
    slabs = std::max(1, static_cast<int>(std::lround(cfg.t_final / cfg.k)));
  }
  RunSetup setup;
  setup.mesh0 = build_uniform_mesh(
      0.0, 1.0, std::max(1, static_cast<int>(std::lround(1.0 / cfg.h0))));
  setup.mesh_g_ref = build_uniform_mesh(
      cfg.g_start, cfg.g_start + cfg.g_length,
      std::max(1, static_cast<int>(std::lround(cfg.g_length / hg))));
  setup.traj = make_trajectory(cfg);
  setup.timeline = build_timeline(cfg.t_final, slabs);
  setup.params.gamma = cfg.gamma;
  setup.q = cfg.q;
  setup.geometry_tol = cfg.tol;
  return setup;
}

int run_solve(const CliConfig& cfg) {
  const RunSetup setup = make_setup(cfg);
  HeatProblem problem;
  bool has_exact = false;
  if (cfg.problem == "manufactured") {
    problem.initial = manufactured::initial();
    problem.source = manufactured::source;
    has_exact = true;
  } else if (cfg.problem == "decay") {
    problem.initial = manufactured::initial();
  } else if (cfg.problem == "zero") {
    problem.initial.value = [](double) { return 0.0; };
  } else {
    throw CLI::ValidationError("--problem",
                               "expected manufactured, decay, or zero");
  }

  MarchOptions opts;
  opts.keep_history = true;
  const Trajectory traj = march(setup, problem, opts);

  std::string csv = solution_csv(traj);
  if (has_exact) {
    const double err = final_error(traj, [&](double x) {
      return manufactured::value(x, cfg.t_final);
    });
    csv += "final_error," + format_number(err) + "\n";
    std::printf("final_error %s\n", format_number(err).c_str());
  }
  write_file(cfg.out, csv);
  return kExitOk;
}

int run_convergence(const CliConfig& cfg) {
  StudyOptions options;
  if (cfg.sweep == "k") {
    options.axis = SweepAxis::k;
  } else if (cfg.sweep == "h") {
    options.axis = SweepAxis::h;
  } else {
    throw CLI::ValidationError("--sweep", "expected k or h");
  }
  options.q = cfg.q;
  if (cfg.mu == "demo-sine") {
    options.demo_velocity = true;
  } else {
    options.mu = parse_mu(cfg.mu);
  }
  options.gamma = cfg.gamma;
  options.t_final = cfg.t_final;
  options.g_start = cfg.g_start;
  options.g_length = cfg.g_length;
  options.fixed_h = cfg.fixed_h;
  options.fixed_k = cfg.fixed_k;
  options.threads = cfg.threads;
  options.first_point = 1;
  options.last_point = 15;
  if (!cfg.sweep_points.empty()) {
    std::tie(options.first_point, options.last_point) =
        parse_range(cfg.sweep_points, "--sweep-points");
  }
  options.fit_first = options.first_point;
  options.fit_last = options.last_point;
  if (!cfg.points.empty()) {
    std::tie(options.fit_first, options.fit_last) =
        parse_range(cfg.points, "--points");
  }

  const ConvergenceReport report = convergence_study(options);
  write_file(cfg.out, convergence_csv(report));
  std::printf("slope %s over points %d-%d\n",
              format_number(report.slope).c_str(), report.fit_first,
              report.fit_last);
  return kExitOk;
}

int run_stability(const CliConfig& cfg) {
  StabilityOptions options;
  options.q = cfg.q;
  options.mu = cfg.mu == "demo-sine" ? 0.0 : parse_mu(cfg.mu);
  options.gamma = cfg.gamma;
  options.t_final = cfg.t_final;
  options.g_start = cfg.g_start;
  options.g_length = cfg.g_length;
  options.base_h = cfg.base_h;
  options.base_k = cfg.base_k;
  options.levels = cfg.levels;

  SmoothFunction u0 = manufactured::initial();
  const std::vector<StabilityReport> reports = stability_probe(u0, options);
  write_file(cfg.out, stability_csv(reports));
  for (const StabilityReport& r : reports) {
    std::printf("level %d: decay %s, main constant %s\n", r.level,
                format_number(r.decay_ratio()).c_str(),
                format_number(r.main_constant()).c_str());
  }
  return kExitOk;
}

// The two-mesh example run: 21 background cells, 6 overlapping cells, ten
// slabs on (0, 3], slabwise-sampled sine velocity; solved for both dG orders.
int run_demo(const CliConfig& cfg) {
  std::string prefix = cfg.out;
  const auto dot = prefix.rfind(".csv");
  if (dot != std::string::npos && dot == prefix.size() - 4) {
    prefix = prefix.substr(0, dot);
  }

  CliConfig demo = cfg;
  demo.t_final = 3.0;
  demo.slabs = 10;
  demo.k = 0.0;
  demo.h0 = 1.0 / 21.0;
  demo.hg = 0.25 / 6.0;
  demo.g_start = 0.125;
  demo.g_length = 0.25;
  demo.mu = "demo-sine";

  for (int q = 0; q <= 1; ++q) {
    demo.q = q;
    const RunSetup setup = make_setup(demo);
    HeatProblem problem;
    problem.initial = manufactured::initial();
    problem.source = manufactured::source;

    MarchOptions opts;
    opts.keep_history = true;
    const Trajectory traj = march(setup, problem, opts);
    write_file(prefix + "_dg" + std::to_string(q) + ".csv",
               solution_csv(traj));
    if (q == 0) write_file(prefix + "_geometry.csv", geometry_csv(traj));
  }
  std::printf("demo outputs written to %s_dg0.csv, %s_dg1.csv, %s_geometry.csv\n",
              prefix.c_str(), prefix.c_str(), prefix.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Cut finite element solver for the heat equation on a fixed background "
      "mesh with a slabwise-moving overlapping mesh"};
  app.allow_config_extras(false);

  CliConfig cfg;
  app.set_config("--config", "", "flat key=value config file");
  app.add_option("command,--command", cfg.command,
                 "solve | convergence | stability | demo");
  app.add_option("--t-final", cfg.t_final, "final time")->check(CLI::PositiveNumber);
  app.add_option("--slabs", cfg.slabs, "number of time slabs")
      ->check(CLI::PositiveNumber);
  app.add_option("--k", cfg.k, "time step (overrides --slabs)");
  app.add_option("--h0", cfg.h0, "background mesh size")->check(CLI::PositiveNumber);
  app.add_option("--hg", cfg.hg, "overlapping mesh size (default h0)");
  app.add_option("--g-start", cfg.g_start, "initial left endpoint of G");
  app.add_option("--g-length", cfg.g_length, "length of G")
      ->check(CLI::PositiveNumber);
  app.add_option("--mu", cfg.mu, "interface velocity (number or demo-sine)");
  app.add_option("--gamma", cfg.gamma, "interface penalty")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--q", cfg.q, "dG order in time (0 or 1)")->check(CLI::Range(0, 1));
  app.add_option("--sweep", cfg.sweep, "convergence sweep axis: k or h");
  app.add_option("--points", cfg.points, "fit range for the slope, e.g. 9-12");
  app.add_option("--sweep-points", cfg.sweep_points,
                 "sweep point range to run, e.g. 1-15");
  app.add_option("--fixed-h", cfg.fixed_h, "mesh size held fixed in k sweeps")
      ->check(CLI::PositiveNumber);
  app.add_option("--fixed-k", cfg.fixed_k, "time step held fixed in h sweeps")
      ->check(CLI::PositiveNumber);
  app.add_option("--problem", cfg.problem,
                 "solve problem: manufactured | decay | zero");
  app.add_option("--levels", cfg.levels, "stability refinement levels")
      ->check(CLI::PositiveNumber);
  app.add_option("--base-h", cfg.base_h, "stability base mesh size")
      ->check(CLI::PositiveNumber);
  app.add_option("--base-k", cfg.base_k, "stability base time step")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", cfg.threads, "sweep worker threads (0 = auto)");
  app.add_option("--tol", cfg.tol, "interface snapping tolerance")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", cfg.out, "output CSV path (prefix for demo)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (cfg.command == "solve") return run_solve(cfg);
    if (cfg.command == "convergence") return run_convergence(cfg);
    if (cfg.command == "stability") return run_stability(cfg);
    if (cfg.command == "demo") return run_demo(cfg);
    std::fprintf(stderr,
                 "error: field command: expected solve, convergence, "
                 "stability, or demo (got \"%s\")\n",
                 cfg.command.c_str());
    return kExitConfig;
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const MarchError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
}
