#include "cutheat/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cutheat {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string convergence_csv(const ConvergenceReport& report) {
  std::string out = "axis_value,error\n";
  for (const ConvergenceRow& row : report.rows) {
    out += format_number(row.axis_value);
    out += ',';
    out += format_number(row.error);
    out += '\n';
  }
  out += "slope," + format_number(report.slope) + ",points," +
         std::to_string(report.fit_first) + "-" +
         std::to_string(report.fit_last) + "\n";
  return out;
}

std::string stability_csv(const std::vector<StabilityReport>& reports) {
  std::string out =
      "level,q,h0,k,u0_norm,final_norm,dt_integral,lap_integral,jump_sum,"
      "energy_integral_sq,jump_sum_sq,strong_dt_sq,strong_lap_sq,"
      "strong_jump_sq,log_factor,decay_ratio,main_constant,basic_constant,"
      "strong_constant\n";
  for (const StabilityReport& r : reports) {
    out += std::to_string(r.level) + ',' + std::to_string(r.q) + ',';
    for (double v : {r.h0, r.k, r.u0_norm, r.final_norm, r.dt_integral,
                     r.lap_integral, r.jump_sum, r.energy_integral_sq,
                     r.jump_sum_sq, r.strong_dt_sq, r.strong_lap_sq,
                     r.strong_jump_sq, r.log_factor, r.decay_ratio(),
                     r.main_constant(), r.basic_constant(),
                     r.strong_constant()}) {
      out += format_number(v);
      out += ',';
    }
    out.back() = '\n';
  }
  return out;
}

std::string solution_csv(const Trajectory& traj) {
  if (traj.history.empty()) {
    throw std::invalid_argument("solution_csv: trajectory has no history");
  }
  std::string out = "x,t,u\n";
  for (int n = 1; n <= traj.setup.timeline.slab_count(); ++n) {
    const BrokenSpace space = traj.space_at(n);
    const std::vector<double>& trace = traj.history[n - 1].node_coeffs.back();
    const double t = traj.setup.timeline.slab_end(n);
    for (const Dof& dof : space.dofs()) {
      const Side side =
          dof.kind == Dof::Kind::background ? Side::omega1 : Side::omega2;
      out += format_number(dof.x);
      out += ',';
      out += format_number(t);
      out += ',';
      out += format_number(space.eval(trace, dof.x, side));
      out += '\n';
    }
  }
  return out;
}

std::string geometry_csv(const Trajectory& traj) {
  std::string out = "n,t,g_left,g_right\n";
  for (int n = 0; n <= traj.setup.timeline.slab_count(); ++n) {
    if (traj.positions.empty()) break;
    out += std::to_string(n) + ',' +
           format_number(traj.setup.timeline.times[n]) + ',' +
           format_number(traj.positions[n]) + ',' +
           format_number(traj.positions[n] + traj.setup.traj.length) + '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << contents;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace cutheat
