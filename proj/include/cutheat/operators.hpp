#pragma once

#include <array>
#include <functional>
#include <memory>

#include "cutheat/forms.hpp"

namespace cutheat {

/// A scalar function on the domain with the derivatives the interface terms
/// need. `second` may be left empty when unused.
struct SmoothFunction {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  std::function<double(double)> second;
};

/// Moment vector (w, phi_i) over the broken segments, three-point Gauss.
std::vector<double> l2_moments(const BrokenSpace& space,
                               const std::function<double(double)>& w);

/// Right-hand side of the Ritz projection for a smooth input: gradient
/// moments plus the normal-derivative coupling to the test jumps (the input's
/// own interface jumps vanish).
std::vector<double> ritz_moments(const BrokenSpace& space,
                                 const SmoothFunction& w,
                                 const NitscheParams& params);

/// Assembled slab matrices with cached banded factorizations; the projection
/// and shift solves below all reduce to these two factors.
class SlabOperators {
 public:
  SlabOperators(const BrokenSpace& space, const NitscheParams& params);

  const BrokenSpace& space() const { return *space_; }
  const NitscheParams& params() const { return params_; }
  const SparseMatrix& stiffness() const { return a_; }
  const SparseMatrix& mass() const { return m_; }

  std::vector<double> solve_mass(std::span<const double> rhs) const;
  std::vector<double> solve_stiffness(std::span<const double> rhs) const;

  std::vector<double> l2_project(const std::function<double(double)>& w) const;
  std::vector<double> l2_project_discrete(const BrokenSpace& from,
                                          std::span<const double> coeffs) const;
  std::vector<double> ritz_project(const SmoothFunction& w) const;
  std::vector<double> laplacian(std::span<const double> coeffs) const;
  std::vector<double> shift_from(const BrokenSpace& from,
                                 std::span<const double> coeffs) const;

  /// sqrt(c' M c), the broken L2 norm of a discrete function.
  double l2_norm(std::span<const double> coeffs) const;

 private:
  const BrokenSpace* space_;
  NitscheParams params_;
  SparseMatrix a_;
  SparseMatrix m_;
  std::unique_ptr<BandedMatrix> a_factor_;
  std::unique_ptr<BandedMatrix> m_factor_;
};

std::vector<double> l2_project(const BrokenSpace& space,
                               const std::function<double(double)>& w,
                               const NitscheParams& params = {});
std::vector<double> l2_project(const BrokenSpace& space,
                               const BrokenSpace& from,
                               std::span<const double> coeffs,
                               const NitscheParams& params = {});
std::vector<double> ritz_project(const BrokenSpace& space,
                                 const SmoothFunction& w,
                                 const NitscheParams& params);
std::vector<double> discrete_laplacian(const BrokenSpace& space,
                                       std::span<const double> coeffs,
                                       const NitscheParams& params);

/// Ritz-like map between slab spaces through the pairwise form: the result x
/// on space_m satisfies A_m x = (pairwise form applied to v) for all test
/// functions on space_m.
std::vector<double> shift(const BrokenSpace& space_n, const BrokenSpace& space_m,
                          std::span<const double> coeffs,
                          const NitscheParams& params);

/// Nodal interpolant onto the broken space (zero at eliminated dofs).
std::vector<double> spatial_interp(const BrokenSpace& space,
                                   const SmoothFunction& w);

/// Degree-q polynomial on (t0, t1] matching the endpoint value and, for
/// q = 1, the integral of v over the interval.
struct TemporalInterpolant {
  int q = 0;
  double t0 = 0.0;
  double t1 = 1.0;
  std::array<double, 2> node_values{0.0, 0.0};  // at t0 and t1

  double operator()(double t) const {
    if (q == 0) return node_values[1];
    const double s = (t - t0) / (t1 - t0);
    return node_values[0] * (1.0 - s) + node_values[1] * s;
  }
};

TemporalInterpolant temporal_interp(int q,
                                    const std::function<double(double)>& v,
                                    double t0, double t1);

}  // namespace cutheat
