#include "cutheat/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace cutheat {

namespace {

void accumulate_moments(std::vector<double>& out, const BrokenSpace& space,
                        const std::function<double(double)>& w,
                        const Segment& seg, bool overlapping,
                        const QuadRule& rule) {
  const BrokenSpace::CellDofs cd = overlapping
                                       ? space.overlapping_cell(seg.cell_g)
                                       : space.background_cell(seg.cell0);
  const double h = cd.node_x[1] - cd.node_x[0];
  const double len = seg.length();
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double x = seg.a + rule.nodes[q] * len;
    const double wq = rule.weights[q] * len * w(x);
    if (cd.dof[0] >= 0) out[cd.dof[0]] += wq * (cd.node_x[1] - x) / h;
    if (cd.dof[1] >= 0) out[cd.dof[1]] += wq * (x - cd.node_x[0]) / h;
  }
}

}  // namespace

std::vector<double> l2_moments(const BrokenSpace& space,
                               const std::function<double(double)>& w) {
  const QuadRule rule = make_rule(RuleKind::gauss3);
  std::vector<double> out(space.dim(), 0.0);
  for (const Segment& seg : space.config().omega1) {
    accumulate_moments(out, space, w, seg, false, rule);
  }
  for (const Segment& seg : space.config().omega2) {
    accumulate_moments(out, space, w, seg, true, rule);
  }
  return out;
}

SlabOperators::SlabOperators(const BrokenSpace& space,
                             const NitscheParams& params)
    : space_(&space),
      params_(params),
      a_(assemble_stiffness(space, params)),
      m_(assemble_mass(space)) {
  a_factor_ = std::make_unique<BandedMatrix>(BandedMatrix::from_sparse(a_));
  a_factor_->factorize();
  m_factor_ = std::make_unique<BandedMatrix>(BandedMatrix::from_sparse(m_));
  m_factor_->factorize();
}

std::vector<double> SlabOperators::solve_mass(
    std::span<const double> rhs) const {
  return m_factor_->solve(rhs);
}

std::vector<double> SlabOperators::solve_stiffness(
    std::span<const double> rhs) const {
  return a_factor_->solve(rhs);
}

std::vector<double> SlabOperators::l2_project(
    const std::function<double(double)>& w) const {
  return solve_mass(l2_moments(*space_, w));
}

std::vector<double> SlabOperators::l2_project_discrete(
    const BrokenSpace& from, std::span<const double> coeffs) const {
  return solve_mass(cross_mass(from, *space_).apply(coeffs));
}

std::vector<double> ritz_moments(const BrokenSpace& space,
                                 const SmoothFunction& w,
                                 const NitscheParams& params) {
  if (!w.deriv) {
    throw std::invalid_argument("ritz_project: derivative callable required");
  }
  params.validate();
  const CutConfig& cfg = space.config();
  const QuadRule rule = make_rule(RuleKind::gauss3);
  std::vector<double> rhs(space.dim(), 0.0);

  auto add_gradient_moments = [&](const Segment& seg, bool overlapping) {
    const BrokenSpace::CellDofs cd = overlapping
                                         ? space.overlapping_cell(seg.cell_g)
                                         : space.background_cell(seg.cell0);
    const double grad_l = cd.grad_left;
    const double len = seg.length();
    double mean_deriv = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      mean_deriv += rule.weights[q] * w.deriv(seg.a + rule.nodes[q] * len);
    }
    if (cd.dof[0] >= 0) rhs[cd.dof[0]] += len * mean_deriv * grad_l;
    if (cd.dof[1] >= 0) rhs[cd.dof[1]] -= len * mean_deriv * grad_l;
  };
  for (const Segment& seg : cfg.omega1) add_gradient_moments(seg, false);
  for (const Segment& seg : cfg.omega2) add_gradient_moments(seg, true);

  // Smooth inputs have no jumps, so only their normal derivative couples to
  // the test jump at the interface.
  if (cfg.has_interface) {
    for (const GammaPoint& gp : cfg.gamma) {
      const double dn_w = gp.normal * w.deriv(gp.x);
      const int dir1 = gp.normal > 0 ? -1 : +1;
      for (const auto& e : space.value_stencil(gp.x, Side::omega1, dir1)) {
        rhs[e.dof] -= dn_w * e.weight;
      }
      for (const auto& e : space.value_stencil(gp.x, Side::omega2, -dir1)) {
        rhs[e.dof] += dn_w * e.weight;
      }
    }
  }
  return rhs;
}

std::vector<double> SlabOperators::ritz_project(const SmoothFunction& w) const {
  return solve_stiffness(ritz_moments(*space_, w, params_));
}

std::vector<double> SlabOperators::laplacian(
    std::span<const double> coeffs) const {
  std::vector<double> rhs = a_.apply(coeffs);
  for (double& v : rhs) v = -v;
  return solve_mass(rhs);
}

std::vector<double> SlabOperators::shift_from(
    const BrokenSpace& from, std::span<const double> coeffs) const {
  const SparseMatrix pairwise = assemble_special(from, *space_, params_);
  return solve_stiffness(pairwise.apply(coeffs));
}

double SlabOperators::l2_norm(std::span<const double> coeffs) const {
  return std::sqrt(std::max(0.0, dot(coeffs, m_.apply(coeffs))));
}

std::vector<double> l2_project(const BrokenSpace& space,
                               const std::function<double(double)>& w,
                               const NitscheParams& params) {
  return SlabOperators(space, params).l2_project(w);
}

std::vector<double> l2_project(const BrokenSpace& space,
                               const BrokenSpace& from,
                               std::span<const double> coeffs,
                               const NitscheParams& params) {
  return SlabOperators(space, params).l2_project_discrete(from, coeffs);
}

std::vector<double> ritz_project(const BrokenSpace& space,
                                 const SmoothFunction& w,
                                 const NitscheParams& params) {
  return SlabOperators(space, params).ritz_project(w);
}

std::vector<double> discrete_laplacian(const BrokenSpace& space,
                                       std::span<const double> coeffs,
                                       const NitscheParams& params) {
  return SlabOperators(space, params).laplacian(coeffs);
}

std::vector<double> shift(const BrokenSpace& space_n,
                          const BrokenSpace& space_m,
                          std::span<const double> coeffs,
                          const NitscheParams& params) {
  return SlabOperators(space_m, params).shift_from(space_n, coeffs);
}

std::vector<double> spatial_interp(const BrokenSpace& space,
                                   const SmoothFunction& w) {
  return space.interpolate(w.value);
}

TemporalInterpolant temporal_interp(int q,
                                    const std::function<double(double)>& v,
                                    double t0, double t1) {
  if (q != 0 && q != 1) throw std::invalid_argument("temporal_interp: q in {0,1}");
  if (!(t1 > t0)) throw std::invalid_argument("temporal_interp: empty interval");
  TemporalInterpolant p;
  p.q = q;
  p.t0 = t0;
  p.t1 = t1;
  const double end = v(t1);
  if (q == 0) {
    p.node_values = {end, end};
    return p;
  }
  const QuadRule rule = make_rule(RuleKind::gauss3);
  const std::array<Interval, 1> segs = {Interval{t0, t1}};
  const double mean = integrate(v, segs, rule) / (t1 - t0);
  p.node_values = {2.0 * mean - end, end};
  return p;
}

}  // namespace cutheat
