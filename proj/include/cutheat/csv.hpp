#pragma once

#include <string>

#include "cutheat/analysis.hpp"

namespace cutheat {

/// 17-significant-digit serialization so round-trips are exact.
std::string format_number(double v);

/// Header "axis_value,error", one row per sweep point, then the summary line
/// "slope,<value>,points,<first>-<last>".
std::string convergence_csv(const ConvergenceReport& report);

std::string stability_csv(const std::vector<StabilityReport>& reports);

/// Solution samples "x,t,u" at the broken-space dof coordinates of each slab
/// end; requires a trajectory marched with history.
std::string solution_csv(const Trajectory& traj);

/// Slab geometry "n,t_n,g_left,g_right" of a trajectory with an interface.
std::string geometry_csv(const Trajectory& traj);

void write_file(const std::string& path, const std::string& contents);

}  // namespace cutheat
