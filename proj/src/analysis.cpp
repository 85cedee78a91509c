#include "cutheat/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "cutheat/problems.hpp"

namespace cutheat {

namespace {

double function_l2_sq(const BrokenSpace& space,
                      const std::function<double(double)>& f) {
  const QuadRule rule = make_rule(RuleKind::gauss3);
  std::vector<Interval> segs;
  for (const Segment& s : space.config().omega1) segs.push_back(s.interval());
  for (const Segment& s : space.config().omega2) segs.push_back(s.interval());
  return integrate([&](double x) { const double v = f(x); return v * v; },
                   segs, rule);
}

double segment_error_sq(const BrokenSpace& space,
                        std::span<const double> coeffs, const Segment& seg,
                        bool overlapping,
                        const std::function<double(double)>& exact,
                        const QuadRule& rule, int subdivisions) {
  const BrokenSpace::CellDofs cd = overlapping
                                       ? space.overlapping_cell(seg.cell_g)
                                       : space.background_cell(seg.cell0);
  const double h = cd.node_x[1] - cd.node_x[0];
  double acc = 0.0;
  for (int s = 0; s < subdivisions; ++s) {
    const double a = seg.a + seg.length() * s / subdivisions;
    const double len = seg.length() / subdivisions;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = a + rule.nodes[q] * len;
      double uh = 0.0;
      if (cd.dof[0] >= 0) uh += coeffs[cd.dof[0]] * (cd.node_x[1] - x) / h;
      if (cd.dof[1] >= 0) uh += coeffs[cd.dof[1]] * (x - cd.node_x[0]) / h;
      const double d = exact(x) - uh;
      acc += rule.weights[q] * len * d * d;
    }
  }
  return acc;
}

}  // namespace

double final_error(const Trajectory& traj,
                   const std::function<double(double)>& exact_at_t_final,
                   int subdivisions) {
  if (!traj.final_space) throw std::invalid_argument("trajectory incomplete");
  if (subdivisions < 1) throw std::invalid_argument("subdivisions >= 1");
  const BrokenSpace& space = *traj.final_space;
  const QuadRule rule = make_rule(RuleKind::gauss3);
  double acc = 0.0;
  for (const Segment& seg : space.config().omega1) {
    acc += segment_error_sq(space, traj.final_trace, seg, false,
                            exact_at_t_final, rule, subdivisions);
  }
  for (const Segment& seg : space.config().omega2) {
    acc += segment_error_sq(space, traj.final_trace, seg, true,
                            exact_at_t_final, rule, subdivisions);
  }
  return std::sqrt(acc);
}

double lls_slope(std::span<const std::pair<double, double>> points, int first,
                 int last) {
  if (first < 1 || last > static_cast<int>(points.size()) || last - first < 1) {
    throw std::invalid_argument("lls_slope: need at least two points in range");
  }
  double sx = 0.0;
  double sy = 0.0;
  const int count = last - first + 1;
  for (int i = first; i <= last; ++i) {
    const auto& [x, e] = points[i - 1];
    if (!(x > 0.0) || !(e > 0.0)) {
      throw std::invalid_argument("lls_slope: points must be positive");
    }
    sx += std::log(x);
    sy += std::log(e);
  }
  const double mx = sx / count;
  const double my = sy / count;
  double cov = 0.0;
  double var = 0.0;
  for (int i = first; i <= last; ++i) {
    const auto& [x, e] = points[i - 1];
    const double dx = std::log(x) - mx;
    cov += dx * (std::log(e) - my);
    var += dx * dx;
  }
  if (var == 0.0) throw std::invalid_argument("lls_slope: degenerate abscissae");
  return cov / var;
}

double sweep_k_value(int j, double t_final) {
  return t_final * std::pow(2.0, -j);
}

double sweep_h_value(int j) { return 1.0 / (8.0 * j); }

RunSetup study_setup(const StudyOptions& options, int point) {
  double h = 0.0;
  double k = 0.0;
  if (options.axis == SweepAxis::k) {
    h = options.fixed_h;
    k = sweep_k_value(point, options.t_final);
  } else {
    h = sweep_h_value(point);
    k = options.fixed_k;
  }
  const int cells0 = std::max(1, static_cast<int>(std::lround(1.0 / h)));
  const int cells_g = std::max(
      1, static_cast<int>(std::lround(options.g_length / h)));
  const int n_slabs =
      std::max(1, static_cast<int>(std::lround(options.t_final / k)));

  RunSetup setup;
  setup.mesh0 = build_uniform_mesh(0.0, 1.0, cells0);
  setup.mesh_g_ref = build_uniform_mesh(
      options.g_start, options.g_start + options.g_length, cells_g);
  setup.traj =
      options.demo_velocity
          ? InterfaceTrajectory::sampled(
                options.g_start, options.g_length,
                [](double t) { return 0.5 * std::sin(2.0 * std::numbers::pi * t / 3.0); })
          : InterfaceTrajectory::constant(options.g_start, options.g_length,
                                          options.mu);
  setup.timeline = build_timeline(options.t_final, n_slabs);
  setup.params.gamma = options.gamma;
  setup.q = options.q;
  return setup;
}

ConvergenceReport convergence_study(const StudyOptions& options) {
  if (options.first_point < 1 || options.last_point < options.first_point) {
    throw std::invalid_argument("convergence_study: bad point range");
  }
  const int n_points = options.last_point - options.first_point + 1;
  ConvergenceReport report;
  report.axis = options.axis;
  report.fit_first = options.fit_first;
  report.fit_last = options.fit_last;
  report.rows.resize(n_points);

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= n_points || failed.load()) return;
      const int j = options.first_point + idx;
      try {
        const RunSetup setup = study_setup(options, j);
        HeatProblem problem;
        problem.initial = manufactured::initial();
        problem.source = manufactured::source;

        const auto start = std::chrono::steady_clock::now();
        const Trajectory traj = march(setup, problem);
        const double error = final_error(traj, [&](double x) {
          return manufactured::value(x, options.t_final);
        });
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - start;

        ConvergenceRow& row = report.rows[idx];
        row.point = j;
        row.axis_value = options.axis == SweepAxis::k ? sweep_k_value(j, options.t_final)
                                                      : sweep_h_value(j);
        row.h0 = setup.mesh0.max_cell_size();
        row.h_g = setup.mesh_g_ref.max_cell_size();
        row.k = setup.timeline.slab_length(1);
        row.error = error;
        row.runtime_seconds = elapsed.count();
      } catch (const std::exception& e) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        failed.store(true);
        failure = "sweep point " + std::to_string(j) + ": " + e.what();
        return;
      }
    }
  };

  int threads = options.threads;
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min(threads, n_points);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failed.load()) throw std::runtime_error(failure);

  std::vector<std::pair<double, double>> pts;
  pts.reserve(n_points);
  int fit_first_idx = -1;
  int fit_last_idx = -1;
  for (const ConvergenceRow& row : report.rows) {
    pts.emplace_back(row.axis_value, row.error);
    if (row.point == options.fit_first) fit_first_idx = static_cast<int>(pts.size());
    if (row.point == options.fit_last) fit_last_idx = static_cast<int>(pts.size());
  }
  if (fit_first_idx < 0 || fit_last_idx < 0) {
    throw std::invalid_argument("convergence_study: fit range outside sweep");
  }
  report.slope = lls_slope(pts, fit_first_idx, fit_last_idx);
  return report;
}

double StabilityReport::basic_constant() const {
  return std::sqrt(final_norm * final_norm + energy_integral_sq + jump_sum_sq) /
         u0_norm;
}

double StabilityReport::strong_constant() const {
  return std::sqrt(strong_dt_sq + strong_lap_sq + strong_jump_sq) / u0_norm;
}

std::vector<StabilityReport> stability_probe(const SmoothFunction& u0,
                                             const StabilityOptions& options) {
  std::vector<StabilityReport> reports;
  const QuadRule time_rule = make_rule(RuleKind::gauss3);

  for (int level = 0; level < options.levels; ++level) {
    const double h = options.base_h / (1 << level);
    const double k = options.base_k / (1 << level);
    StudyOptions grid;
    grid.q = options.q;
    grid.mu = options.mu;
    grid.gamma = options.gamma;
    grid.t_final = options.t_final;
    grid.g_start = options.g_start;
    grid.g_length = options.g_length;
    grid.axis = SweepAxis::k;
    grid.fixed_h = h;
    RunSetup setup = study_setup(grid, 1);
    setup.timeline = build_timeline(
        options.t_final,
        std::max(1, static_cast<int>(std::lround(options.t_final / k))));

    StabilityReport rep;
    rep.level = level;
    rep.q = options.q;
    rep.h0 = setup.mesh0.max_cell_size();
    rep.k = setup.timeline.slab_length(1);
    rep.log_factor = std::sqrt(
        std::log(setup.timeline.final_time() / setup.timeline.slab_length(1)) +
        1.0);

    double prev_trace_msq = 0.0;  // ||w^-||^2 on the previous slab's mass

    auto observer = [&](const SlabView& view) {
      const SlabSystem& sys = view.system;
      const BrokenSpace& space = *sys.space;
      const SparseMatrix& mass = sys.mass;
      const double t_n = view.t_end;
      const double kn = sys.k;

      BandedMatrix mass_factor = BandedMatrix::from_sparse(mass);
      mass_factor.factorize();
      auto m_ip = [&](std::span<const double> x, std::span<const double> y) {
        return dot(x, mass.apply(y));
      };

      if (sys.n == 1) {
        rep.u0_norm = std::sqrt(function_l2_sq(space, u0.value));
      }

      // Jump at t_{n-1}: ||w+||^2 - 2 (w+, w-) + ||w-||^2, with the cross term
      // from the assembled coupling vector. On the first slab w- is u0.
      const std::vector<double>& plus = view.node_coeffs.front();
      const double prev_sq =
          sys.n == 1 ? rep.u0_norm * rep.u0_norm : prev_trace_msq;
      const double jump_sq = std::max(
          0.0, m_ip(plus, plus) - 2.0 * dot(plus, sys.coupling_vector) + prev_sq);
      rep.jump_sum += std::sqrt(jump_sq);
      rep.jump_sum_sq += jump_sq;
      if (sys.n >= 2) rep.strong_jump_sq += (t_n / kn) * jump_sq;

      // Discrete Laplacian at the temporal nodes: M z = -A u.
      std::vector<std::vector<double>> z;
      for (const std::vector<double>& u : view.node_coeffs) {
        std::vector<double> rhs = sys.stiffness.apply(u);
        for (double& v : rhs) v = -v;
        z.push_back(mass_factor.solve(rhs));
      }

      const NitscheParams& params = setup.params;
      if (sys.q == 0) {
        const std::vector<double>& u = view.node_coeffs[0];
        const double z_norm = std::sqrt(std::max(0.0, m_ip(z[0], z[0])));
        rep.lap_integral += kn * z_norm;
        rep.strong_lap_sq += t_n * kn * z_norm * z_norm;
        const double e = energy_norm(space, u, params);
        rep.energy_integral_sq += kn * e * e;
      } else {
        // du/dt is constant on the slab for endpoint Lagrange nodes.
        std::vector<double> diff(space.dim());
        for (int i = 0; i < space.dim(); ++i) {
          diff[i] = view.node_coeffs[1][i] - view.node_coeffs[0][i];
        }
        const double diff_norm = std::sqrt(std::max(0.0, m_ip(diff, diff)));
        rep.dt_integral += diff_norm;
        rep.strong_dt_sq += t_n * diff_norm * diff_norm / kn;

        const double z00 = m_ip(z[0], z[0]);
        const double z01 = m_ip(z[0], z[1]);
        const double z11 = m_ip(z[1], z[1]);
        rep.strong_lap_sq +=
            t_n * (kn / 3.0) * std::max(0.0, z00 + z01 + z11);

        std::vector<double> at_tau(space.dim());
        for (std::size_t qn = 0; qn < time_rule.nodes.size(); ++qn) {
          const double s = time_rule.nodes[qn];
          const double w = time_rule.weights[qn] * kn;
          for (int i = 0; i < space.dim(); ++i) {
            at_tau[i] = (1.0 - s) * view.node_coeffs[0][i] +
                        s * view.node_coeffs[1][i];
          }
          const double zq = std::sqrt(std::max(
              0.0, (1.0 - s) * (1.0 - s) * z00 + 2.0 * s * (1.0 - s) * z01 +
                       s * s * z11));
          rep.lap_integral += w * zq;
          const double e = energy_norm(space, at_tau, params);
          rep.energy_integral_sq += w * e * e;
        }
      }

      const std::vector<double>& trace = view.node_coeffs.back();
      prev_trace_msq = std::max(0.0, m_ip(trace, trace));
      if (sys.n == setup.timeline.slab_count()) {
        rep.final_norm = std::sqrt(prev_trace_msq);
      }
    };

    HeatProblem problem;
    problem.initial = u0;

    MarchOptions opts;
    opts.observer = observer;
    march(setup, problem, opts);
    reports.push_back(rep);
  }
  return reports;
}

}  // namespace cutheat
