#include "cutheat/forms.hpp"

#include <cmath>
#include <stdexcept>

namespace cutheat {

namespace {

using Stencil = BrokenSpace::Stencil;

void append_scaled(Stencil& dst, const Stencil& src, double factor) {
  for (const auto& e : src) dst.push_back({e.dof, factor * e.weight});
}

double apply_stencil(const Stencil& st, std::span<const double> coeffs) {
  double v = 0.0;
  for (const auto& e : st) v += coeffs[e.dof] * e.weight;
  return v;
}

struct GammaStencils {
  Stencil jump;  // background trace minus overlapping trace
  Stencil avg;   // convex-weighted normal derivative
  double h_k = 0.0;
};

// Approach directions around an interface point: Omega_1 lies left of the
// left point (normal +1) and right of the right point (normal -1).
GammaStencils gamma_stencils(const BrokenSpace& space, const GammaPoint& gp,
                             const NitscheParams& params) {
  const int dir1 = gp.normal > 0 ? -1 : +1;
  const int dir2 = -dir1;
  GammaStencils out;
  out.h_k = gp.h_k;
  append_scaled(out.jump, space.value_stencil(gp.x, Side::omega1, dir1), 1.0);
  append_scaled(out.jump, space.value_stencil(gp.x, Side::omega2, dir2), -1.0);
  append_scaled(out.avg, space.gradient_stencil(gp.x, Side::omega1, dir1),
                gp.normal * params.omega1);
  append_scaled(out.avg, space.gradient_stencil(gp.x, Side::omega2, dir2),
                gp.normal * params.omega2);
  return out;
}

// Average normal derivative of a foreign-configuration function at an
// interface point of gp's configuration; both one-sided limits resolve on
// `space`'s own regions.
Stencil foreign_average(const BrokenSpace& space, const GammaPoint& gp,
                        const NitscheParams& params) {
  const int dir1 = gp.normal > 0 ? -1 : +1;
  const int dir2 = -dir1;
  Stencil out;
  append_scaled(out, space.gradient_stencil(gp.x, Side::automatic, dir1),
                gp.normal * params.omega1);
  append_scaled(out, space.gradient_stencil(gp.x, Side::automatic, dir2),
                gp.normal * params.omega2);
  return out;
}

void add_outer(std::vector<Triplet>& tr, const Stencil& rows,
               const Stencil& cols, double factor) {
  for (const auto& r : rows) {
    for (const auto& c : cols) {
      tr.push_back({r.dof, c.dof, factor * r.weight * c.weight});
    }
  }
}

// Gradient stencil of the region owner on a partition/config segment.
Stencil segment_gradient(const BrokenSpace& space, int region, int cell0,
                         int cell_g) {
  const BrokenSpace::CellDofs cd = region == 2 ? space.overlapping_cell(cell_g)
                                               : space.background_cell(cell0);
  Stencil st;
  if (cd.dof[0] >= 0) st.push_back({cd.dof[0], cd.grad_left});
  if (cd.dof[1] >= 0) st.push_back({cd.dof[1], -cd.grad_left});
  return st;
}

void add_segment_mass(std::vector<Triplet>& tr, const BrokenSpace& space,
                      const Segment& seg, bool overlapping) {
  const BrokenSpace::CellDofs cd = overlapping
                                       ? space.overlapping_cell(seg.cell_g)
                                       : space.background_cell(seg.cell0);
  const double h = cd.node_x[1] - cd.node_x[0];
  static const QuadRule rule = make_rule(RuleKind::gauss2);
  const double len = seg.length();
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double x = seg.a + rule.nodes[q] * len;
    const double w = rule.weights[q] * len;
    const std::array<double, 2> v = {(cd.node_x[1] - x) / h,
                                     (x - cd.node_x[0]) / h};
    for (int i = 0; i < 2; ++i) {
      if (cd.dof[i] < 0) continue;
      for (int j = 0; j < 2; ++j) {
        if (cd.dof[j] < 0) continue;
        tr.push_back({cd.dof[i], cd.dof[j], w * v[i] * v[j]});
      }
    }
  }
}

}  // namespace

void NitscheParams::validate() const {
  if (gamma < 0.0) throw std::invalid_argument("gamma must be nonnegative");
  if (omega1 < 0.0 || omega1 > 1.0 || omega2 < 0.0 || omega2 > 1.0 ||
      std::abs(omega1 + omega2 - 1.0) > 1e-12) {
    throw std::invalid_argument("interface weights must be convex");
  }
}

SparseMatrix assemble_stiffness(const BrokenSpace& space,
                                const NitscheParams& params) {
  params.validate();
  const CutConfig& cfg = space.config();
  std::vector<Triplet> tr;
  tr.reserve(8 * (cfg.omega1.size() + cfg.omega2.size()));

  for (const Segment& seg : cfg.omega1) {
    const Stencil g = segment_gradient(space, 1, seg.cell0, -1);
    add_outer(tr, g, g, seg.length());
  }
  for (const Segment& seg : cfg.omega2) {
    const Stencil g = segment_gradient(space, 2, -1, seg.cell_g);
    add_outer(tr, g, g, seg.length());
  }
  for (const Segment& seg : cfg.overlap) {
    // [grad v] on the overlap: background minus overlapping gradient.
    Stencil d = segment_gradient(space, 1, seg.cell0, -1);
    append_scaled(d, segment_gradient(space, 2, -1, seg.cell_g), -1.0);
    add_outer(tr, d, d, seg.length());
  }
  if (cfg.has_interface) {
    for (const GammaPoint& gp : cfg.gamma) {
      const GammaStencils gs = gamma_stencils(space, gp, params);
      add_outer(tr, gs.avg, gs.jump, -1.0);
      add_outer(tr, gs.jump, gs.avg, -1.0);
      add_outer(tr, gs.jump, gs.jump, params.gamma / gs.h_k);
    }
  }
  return SparseMatrix::from_triplets(space.dim(), space.dim(), std::move(tr));
}

SparseMatrix assemble_mass(const BrokenSpace& space) {
  const CutConfig& cfg = space.config();
  std::vector<Triplet> tr;
  tr.reserve(8 * (cfg.omega1.size() + cfg.omega2.size()));
  for (const Segment& seg : cfg.omega1) {
    add_segment_mass(tr, space, seg, false);
  }
  for (const Segment& seg : cfg.omega2) {
    add_segment_mass(tr, space, seg, true);
  }
  return SparseMatrix::from_triplets(space.dim(), space.dim(), std::move(tr));
}

SparseMatrix assemble_special(const BrokenSpace& space_n,
                              const BrokenSpace& space_m,
                              const NitscheParams& params) {
  params.validate();
  const std::vector<PairSegment> parts =
      partition_pairwise(space_n.config(), space_m.config());

  std::vector<Triplet> tr;
  tr.reserve(4 * parts.size());
  for (const PairSegment& seg : parts) {
    const Stencil gn =
        segment_gradient(space_n, seg.region_n, seg.cell0, seg.cell_g_n);
    const Stencil gm =
        segment_gradient(space_m, seg.region_m, seg.cell0, seg.cell_g_m);
    add_outer(tr, gm, gn, seg.length());
  }
  if (space_n.config().has_interface) {
    for (const GammaPoint& gp : space_n.config().gamma) {
      const GammaStencils gs = gamma_stencils(space_n, gp, params);
      const Stencil avg_m = foreign_average(space_m, gp, params);
      add_outer(tr, avg_m, gs.jump, -1.0);
    }
  }
  if (space_m.config().has_interface) {
    for (const GammaPoint& gp : space_m.config().gamma) {
      const GammaStencils gs = gamma_stencils(space_m, gp, params);
      const Stencil avg_n = foreign_average(space_n, gp, params);
      add_outer(tr, gs.jump, avg_n, -1.0);
    }
  }
  return SparseMatrix::from_triplets(space_m.dim(), space_n.dim(),
                                     std::move(tr));
}

double energy_norm(const BrokenSpace& space, std::span<const double> coeffs,
                   const NitscheParams& params) {
  params.validate();
  const CutConfig& cfg = space.config();
  double acc = 0.0;
  for (const Segment& seg : cfg.omega1) {
    const double g =
        apply_stencil(segment_gradient(space, 1, seg.cell0, -1), coeffs);
    acc += seg.length() * g * g;
  }
  for (const Segment& seg : cfg.omega2) {
    const double g =
        apply_stencil(segment_gradient(space, 2, -1, seg.cell_g), coeffs);
    acc += seg.length() * g * g;
  }
  for (const Segment& seg : cfg.overlap) {
    const double d =
        apply_stencil(segment_gradient(space, 1, seg.cell0, -1), coeffs) -
        apply_stencil(segment_gradient(space, 2, -1, seg.cell_g), coeffs);
    acc += seg.length() * d * d;
  }
  if (cfg.has_interface) {
    for (const GammaPoint& gp : cfg.gamma) {
      const GammaStencils gs = gamma_stencils(space, gp, params);
      const double avg = apply_stencil(gs.avg, coeffs);
      const double jump = apply_stencil(gs.jump, coeffs);
      acc += gs.h_k * avg * avg + jump * jump / gs.h_k;
    }
  }
  return std::sqrt(acc);
}

std::pair<double, double> jump_identity_check(double a_plus, double a_minus,
                                              double b_plus, double b_minus,
                                              double w_plus, double w_minus) {
  if (std::abs(w_plus + w_minus - 1.0) > 1e-12) {
    throw std::invalid_argument("jump identity: weights must sum to one");
  }
  const double lhs = a_plus * b_plus - a_minus * b_minus;
  const double jump_a = a_plus - a_minus;
  const double jump_b = b_plus - b_minus;
  const double avg_a = w_plus * a_plus + w_minus * a_minus;
  const double avg_b = w_plus * b_plus + w_minus * b_minus;
  const double rhs =
      jump_a * avg_b + avg_a * jump_b + (w_minus - w_plus) * jump_a * jump_b;
  return {lhs, rhs};
}

}  // namespace cutheat
