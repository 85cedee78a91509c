#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cutheat/quadrature.hpp"

namespace cutheat {

/// 1D simplicial mesh given by strictly increasing node coordinates.
struct Mesh1D {
  std::vector<double> nodes;

  int cell_count() const { return static_cast<int>(nodes.size()) - 1; }
  int node_count() const { return static_cast<int>(nodes.size()); }
  double left() const { return nodes.front(); }
  double right() const { return nodes.back(); }
  double cell_left(int k) const { return nodes[k]; }
  double cell_right(int k) const { return nodes[k + 1]; }
  double cell_size(int k) const { return nodes[k + 1] - nodes[k]; }
  double max_cell_size() const;
  double min_cell_size() const;
  double quasi_uniformity_ratio() const {
    return max_cell_size() / min_cell_size();
  }

  /// Cell containing x. At a shared node, dir < 0 picks the left cell and
  /// dir >= 0 the right one; indices are clamped to the mesh.
  int locate(double x, int dir = 1) const;

  /// Same node pattern shifted so the left endpoint sits at new_left.
  Mesh1D placed_at(double new_left) const;

  void validate() const;
};

Mesh1D build_uniform_mesh(double a, double b, int n_cells);

/// Partition 0 = t_0 < t_1 < ... < t_N = T of the time interval.
struct SlabTimeline {
  std::vector<double> times;

  int slab_count() const { return static_cast<int>(times.size()) - 1; }
  double final_time() const { return times.back(); }
  /// Slabs are indexed 1..N: I_n = (t_{n-1}, t_n].
  double slab_start(int n) const { return times[n - 1]; }
  double slab_end(int n) const { return times[n]; }
  double slab_length(int n) const { return times[n] - times[n - 1]; }
  double min_slab_length() const;

  void validate() const;
};

SlabTimeline build_timeline(double t_final, int n_slabs);

/// Position rule for the overlapping domain G = (a, a + length). The velocity
/// is slabwise constant; positions accumulate as a_n = a_{n-1} + mu(t_n) k_n,
/// which for constant mu collapses to a_n = a_0 + mu t_n.
struct InterfaceTrajectory {
  double start = 0.125;
  double length = 0.25;
  std::function<double(double)> velocity;  // sampled at slab end times

  static InterfaceTrajectory constant(double a0, double len, double mu);
  static InterfaceTrajectory sampled(double a0, double len,
                                     std::function<double(double)> mu);

  /// Left endpoints a_0..a_N; throws if any slab leaves the unit interval.
  std::vector<double> positions(const SlabTimeline& timeline) const;
};

/// G_n = (a_n, b_n) for slab n (1-based).
std::pair<double, double> slab_interface(const InterfaceTrajectory& traj,
                                         const SlabTimeline& timeline, int n);

struct GammaPoint {
  double x = 0.0;
  int owner_cell = -1;  // background cell supplying h_K
  double h_k = 0.0;
  int normal = +1;  // outward normal of Omega_1: +1 at the left point
  bool snapped = false;
};

/// A segment with single owner cells: cell0 in the background mesh and, where
/// meaningful, cell_g in the overlapping mesh (-1 otherwise).
struct Segment {
  double a = 0.0;
  double b = 0.0;
  int cell0 = -1;
  int cell_g = -1;

  double length() const { return b - a; }
  double midpoint() const { return 0.5 * (a + b); }
  Interval interval() const { return {a, b}; }
};

/// Per-slab cut decomposition of the unit interval. Omega_1 is the background
/// region outside G, Omega_2 the overlapped region, and the overlap segments
/// are the parts of cut background cells inside Omega_2.
struct CutConfig {
  int slab_index = 0;
  double g_left = 0.0;   // classification interval, snapped
  double g_right = 0.0;
  bool has_interface = false;

  Mesh1D mesh0;
  Mesh1D mesh_g;  // empty nodes when has_interface is false

  std::array<GammaPoint, 2> gamma;
  std::vector<Segment> omega1;
  std::vector<Segment> omega2;
  std::vector<Segment> overlap;
  std::vector<int> covered_background_dofs;

  bool in_omega2(double x) const {
    return has_interface && x > g_left && x < g_right;
  }
  double omega1_measure() const;
  double omega2_measure() const;
  double overlap_measure() const;
};

CutConfig build_cut_config(const Mesh1D& mesh0, const Mesh1D& mesh_g,
                           std::pair<double, double> g, int slab_index,
                           double tol = 1e-10);

/// Background-only configuration with no interface; the broken space then
/// reduces to standard P1 on mesh0.
CutConfig build_uncut_config(const Mesh1D& mesh0);

/// Segment of the pairwise partition of the unit interval by two slab
/// configurations, labeled by the region index (1 or 2) in each.
struct PairSegment {
  double a = 0.0;
  double b = 0.0;
  int region_n = 1;
  int region_m = 1;
  int cell0 = -1;
  int cell_g_n = -1;
  int cell_g_m = -1;

  double length() const { return b - a; }
};

std::vector<PairSegment> partition_pairwise(const CutConfig& cfg_n,
                                            const CutConfig& cfg_m);

}  // namespace cutheat
