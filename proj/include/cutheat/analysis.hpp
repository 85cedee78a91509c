#pragma once

#include <string>
#include <utility>

#include "cutheat/timestepping.hpp"

namespace cutheat {

/// L2 error at the final time against an exact profile, integrated by
/// composite three-point Gauss over the final configuration's segments
/// (each quadrature cell lies inside one owner cell). `subdivisions` refines
/// every segment uniformly; 1 is the production setting.
double final_error(const Trajectory& traj,
                   const std::function<double(double)>& exact_at_t_final,
                   int subdivisions = 1);

/// Slope of the least-squares line through (log x, log e) for the 1-based
/// points first..last.
double lls_slope(std::span<const std::pair<double, double>> points, int first,
                 int last);

enum class SweepAxis { k, h };

struct ConvergenceRow {
  int point = 0;          // 1-based sweep index j
  double axis_value = 0;  // k_j or h_j
  double h0 = 0;
  double h_g = 0;
  double k = 0;
  double error = 0;
  double runtime_seconds = 0;
};

struct ConvergenceReport {
  SweepAxis axis = SweepAxis::k;
  std::vector<ConvergenceRow> rows;
  int fit_first = 1;
  int fit_last = 1;
  double slope = 0.0;
};

/// One convergence study of the manufactured problem. The k sweep uses
/// k_j = T 2^-j at fixed h0 = hG; the h sweep uses h_j = 1/(8j) at fixed k,
/// moving both mesh sizes together.
struct StudyOptions {
  SweepAxis axis = SweepAxis::k;
  int q = 0;
  double mu = 0.6;
  bool demo_velocity = false;  // slabwise mu(t) = sin(2 pi t / 3) / 2
  double gamma = 10.0;
  double t_final = 1.0;
  double g_start = 0.125;
  double g_length = 0.25;
  double fixed_h = 1e-3;  // k sweep
  double fixed_k = 1e-4;  // h sweep
  int first_point = 1;
  int last_point = 15;
  int fit_first = 1;
  int fit_last = 15;
  int threads = 0;  // 0 picks the hardware default
};

double sweep_k_value(int j, double t_final);
double sweep_h_value(int j);

/// Run setup for one sweep point of the study (also used by the CLI).
RunSetup study_setup(const StudyOptions& options, int point);

ConvergenceReport convergence_study(const StudyOptions& options);

/// Stability quantities of one homogeneous run (f == 0), per refinement
/// level, together with the constants implied by the stability estimates.
struct StabilityReport {
  int level = 0;
  int q = 0;
  double h0 = 0;
  double k = 0;
  double u0_norm = 0;      // ||u_0||
  double final_norm = 0;   // ||u_{h,N}^-||
  double dt_integral = 0;  // sum_n int ||du/dt||
  double lap_integral = 0; // sum_n int ||Delta_n u_h||
  double jump_sum = 0;     // sum_n ||[u_h]_{n-1}||
  double energy_integral_sq = 0;  // sum_n int |||u_h|||^2
  double jump_sum_sq = 0;         // sum_n ||[u_h]_{n-1}||^2
  double strong_dt_sq = 0;        // sum_n t_n int ||du/dt||^2
  double strong_lap_sq = 0;       // sum_n t_n int ||Delta_n u_h||^2
  double strong_jump_sq = 0;      // sum_{n>=2} (t_n/k_n) ||[u_h]_{n-1}||^2
  double log_factor = 0;          // sqrt(log(t_N / k_1) + 1)

  double decay_ratio() const { return final_norm / u0_norm; }
  /// Main-estimate constant: full left-hand side over the log-weighted data.
  double main_constant() const {
    return (final_norm + dt_integral + lap_integral + jump_sum) /
           (log_factor * u0_norm);
  }
  double basic_constant() const;
  double strong_constant() const;
};

struct StabilityOptions {
  int q = 0;
  double mu = 0.6;
  double gamma = 10.0;
  double t_final = 1.0;
  double g_start = 0.125;
  double g_length = 0.25;
  double base_h = 1.0 / 16.0;
  double base_k = 1.0 / 8.0;
  int levels = 3;
};

std::vector<StabilityReport> stability_probe(const SmoothFunction& u0,
                                             const StabilityOptions& options);

}  // namespace cutheat
