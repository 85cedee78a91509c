#pragma once

#include <utility>

#include "cutheat/space.hpp"

namespace cutheat {

/// Interface penalty and convex trace weights of the Nitsche coupling.
struct NitscheParams {
  double gamma = 10.0;
  double omega1 = 0.5;
  double omega2 = 0.5;

  void validate() const;
};

/// Stiffness form on one slab: broken gradients, symmetrized Nitsche terms
/// with penalty gamma/h_K at each interface point (h_K from the background
/// owner cell), and the gradient-jump stabilization on the overlap region.
SparseMatrix assemble_stiffness(const BrokenSpace& space,
                                const NitscheParams& params);

/// Broken L2 mass; coincides with cross_mass(space, space).
SparseMatrix assemble_mass(const BrokenSpace& space);

/// Non-symmetric pairwise form between two slab configurations: gradients over
/// the pairwise partition, trial jumps against test averages on the trial
/// interface and vice versa on the test interface. Trial traces resolve on
/// space_n, test traces on space_m. Result is space_m.dim() x space_n.dim().
SparseMatrix assemble_special(const BrokenSpace& space_n,
                              const BrokenSpace& space_m,
                              const NitscheParams& params);

/// Mesh-dependent energy norm: broken H1 seminorm, h_K-weighted interface
/// average and jump evaluations, and the overlap gradient jump.
double energy_norm(const BrokenSpace& space, std::span<const double> coeffs,
                   const NitscheParams& params);

/// Both sides of the pointwise identity
///   [AB] = [A]<B> + <A>[B] + (w_minus - w_plus)[A][B].
std::pair<double, double> jump_identity_check(double a_plus, double a_minus,
                                              double b_plus, double b_minus,
                                              double w_plus, double w_minus);

}  // namespace cutheat
