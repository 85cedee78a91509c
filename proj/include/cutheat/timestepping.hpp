#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>

#include "cutheat/operators.hpp"

namespace cutheat {

/// Heat problem data: initial value and source term f(x, t).
struct HeatProblem {
  SmoothFunction initial;
  std::function<double(double, double)> source;  // empty means f == 0

  /// Discrete initial data takes precedence over `initial` when set.
  struct DiscreteInitial {
    std::shared_ptr<const BrokenSpace> space;
    std::vector<double> coeffs;
  };
  std::optional<DiscreteInitial> discrete_initial;
};

/// Everything that fixes one discrete run: meshes, interface motion, time
/// partition, Nitsche parameters, and the dG order in time.
struct RunSetup {
  Mesh1D mesh0;
  Mesh1D mesh_g_ref;  // reference shape; translated to a_n on each slab
  InterfaceTrajectory traj;
  SlabTimeline timeline;
  NitscheParams params;
  int q = 0;
  double geometry_tol = 1e-10;
  bool use_interface = true;  // false: plain background discretization

  void validate() const;
};

/// Coupling data entering a slab system: the previous slab's trace, a
/// discrete initial function, or an initial-value callable (first slab).
struct DiscreteTrace {
  const BrokenSpace* space = nullptr;
  std::span<const double> coeffs;
};
struct InitialFunction {
  std::function<double(double)> u0;
};
using SlabData = std::variant<DiscreteTrace, InitialFunction>;

/// Assembled dG(q) system of one slab.
struct SlabSystem {
  int n = 1;
  int q = 0;
  double k = 0.0;
  std::shared_ptr<const BrokenSpace> space;
  SparseMatrix stiffness;
  SparseMatrix mass;
  /// Cross mass against the previous slab's space (absent on the first slab,
  /// where the coupling vector holds the initial moments directly).
  std::optional<SparseMatrix> coupling_matrix;
  std::vector<double> coupling_vector;  // (w_prev, phi_i) or (u0, phi_i)
  SparseMatrix block;  // (q+1) * dim, temporal nodes interleaved per dof
  std::vector<double> rhs;
};

SlabSystem assemble_slab(int q, std::shared_ptr<const BrokenSpace> space,
                         const SlabData& data, const SlabTimeline& timeline,
                         int n, const NitscheParams& params,
                         const std::function<double(double, double)>& source);

struct MarchError : std::runtime_error {
  MarchError(int slab, const std::string& what)
      : std::runtime_error("slab " + std::to_string(slab) + ": " + what),
        slab_index(slab) {}
  int slab_index;
};

/// Per-slab view handed to the march observer after the slab solve.
struct SlabView {
  const SlabSystem& system;
  const std::vector<std::vector<double>>& node_coeffs;  // q+1 vectors
  const BrokenSpace* prev_space;                        // null on slab 1
  std::span<const double> prev_coeffs;
  double t_start;
  double t_end;
};
using SlabObserver = std::function<void(const SlabView&)>;

struct MarchOptions {
  bool keep_history = false;
  SlabObserver observer;
};

struct SlabRecord {
  double position = 0.0;  // a_n (unused without an interface)
  std::vector<std::vector<double>> node_coeffs;
};

/// Result of a full march. The final slab state is always materialized;
/// per-slab coefficients are kept only when requested, and spaces of earlier
/// slabs can be rebuilt on demand from the stored setup.
struct Trajectory {
  RunSetup setup;
  std::vector<double> positions;  // a_0..a_N when an interface is present
  std::vector<SlabRecord> history;
  std::shared_ptr<const BrokenSpace> final_space;
  std::vector<double> final_trace;

  BrokenSpace space_at(int n) const;
  /// Trace u_h(t_n^-) on space_at(n); requires history.
  const std::vector<double>& trace_at(int n) const;
};

Trajectory march(const RunSetup& setup, const HeatProblem& problem,
                 const MarchOptions& options = {});

}  // namespace cutheat
