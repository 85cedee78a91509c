#pragma once

#include <span>
#include <vector>

#include "cutheat/geometry.hpp"
#include "cutheat/linalg.hpp"

namespace cutheat {

enum class Side { omega1 = 1, omega2 = 2, automatic = 0 };

/// One degree of freedom of the broken space: a node of the background mesh
/// (Dirichlet and covered nodes excluded) or of the overlapping mesh.
struct Dof {
  enum class Kind { background, overlapping };
  Kind kind = Kind::background;
  int node = -1;
  double x = 0.0;
};

/// Piecewise-linear broken space on a cut configuration: a background function
/// on Omega_1 (and on the overlap region) glued to an overlapping-mesh
/// function on Omega_2, discontinuous at the interface. Dofs are numbered by
/// coordinate, background first on ties, which keeps all slab matrices banded.
class BrokenSpace {
 public:
  explicit BrokenSpace(CutConfig cfg);

  const CutConfig& config() const { return cfg_; }
  const Mesh1D& mesh0() const { return cfg_.mesh0; }
  const Mesh1D& mesh_g() const { return cfg_.mesh_g; }
  int dim() const { return static_cast<int>(dofs_.size()); }
  const std::vector<Dof>& dofs() const { return dofs_; }

  /// Global dof index of a background node (-1 if eliminated) or an
  /// overlapping node.
  int background_dof(int node) const { return bg_node_to_dof_[node]; }
  int overlapping_dof(int node) const { return ov_node_to_dof_[node]; }

  /// Value of the broken function at x. Side::omega1 forces the background
  /// trace, Side::omega2 the overlapping trace; automatic resolves by region.
  double eval(std::span<const double> coeffs, double x,
              Side side = Side::automatic) const;

  /// Piecewise-constant derivative; dir breaks ties at mesh nodes (and at the
  /// interface for automatic side): dir < 0 takes the limit from the left.
  double eval_grad(std::span<const double> coeffs, double x,
                   Side side = Side::automatic, int dir = 1) const;

  /// Dof/weight pairs of the background or overlapping restriction at x.
  /// Eliminated dofs are skipped. At a node, dir picks the owning cell.
  struct StencilEntry {
    int dof;
    double weight;
  };
  using Stencil = std::vector<StencilEntry>;
  Stencil value_stencil(double x, Side side, int dir = 1) const;
  Stencil gradient_stencil(double x, Side side, int dir = 1) const;

  /// Cell dofs and P1 shape data for assembly loops. Entries with dof == -1
  /// correspond to eliminated background nodes.
  struct CellDofs {
    std::array<int, 2> dof;    // left, right node
    std::array<double, 2> node_x;
    double grad_left;          // d(basis of left node)/dx on the cell
  };
  CellDofs background_cell(int cell) const;
  CellDofs overlapping_cell(int cell) const;

  /// Nodal interpolation of a continuous function: values at active
  /// background nodes (zero at eliminated ones) and all overlapping nodes.
  std::vector<double> interpolate(const std::function<double(double)>& f) const;

 private:
  Side resolve(double x, Side side, int dir) const;

  CutConfig cfg_;
  std::vector<Dof> dofs_;
  std::vector<int> bg_node_to_dof_;
  std::vector<int> ov_node_to_dof_;
};

BrokenSpace build_space(const CutConfig& cfg);
BrokenSpace build_space(const CutConfig& cfg, const Mesh1D& mesh0,
                        const Mesh1D& mesh_g);

/// L2 pairing across configurations: entry (i, j) integrates the j-th basis
/// function of `from` against the i-th basis function of `to`, each restricted
/// by its own configuration. Exact for P1 (two-point Gauss per segment of the
/// pairwise partition). Result has dimensions to.dim() x from.dim().
SparseMatrix cross_mass(const BrokenSpace& from, const BrokenSpace& to);

}  // namespace cutheat
