#include "cutheat/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cutheat {

BrokenSpace::BrokenSpace(CutConfig cfg) : cfg_(std::move(cfg)) {
  const Mesh1D& m0 = cfg_.mesh0;
  bg_node_to_dof_.assign(m0.node_count(), -1);

  std::vector<bool> covered(m0.node_count(), false);
  for (int i : cfg_.covered_background_dofs) covered[i] = true;

  // Interior background nodes (homogeneous Dirichlet at the domain boundary)
  // minus covered ones, then every overlapping node.
  std::vector<Dof> dofs;
  for (int i = 1; i + 1 < m0.node_count(); ++i) {
    if (!covered[i]) {
      dofs.push_back({Dof::Kind::background, i, m0.nodes[i]});
    }
  }
  if (cfg_.has_interface) {
    ov_node_to_dof_.assign(cfg_.mesh_g.node_count(), -1);
    for (int i = 0; i < cfg_.mesh_g.node_count(); ++i) {
      dofs.push_back({Dof::Kind::overlapping, i, cfg_.mesh_g.nodes[i]});
    }
  }
  std::stable_sort(dofs.begin(), dofs.end(), [](const Dof& a, const Dof& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.kind == Dof::Kind::background && b.kind == Dof::Kind::overlapping;
  });
  dofs_ = std::move(dofs);
  for (int g = 0; g < dim(); ++g) {
    const Dof& d = dofs_[g];
    if (d.kind == Dof::Kind::background) {
      bg_node_to_dof_[d.node] = g;
    } else {
      ov_node_to_dof_[d.node] = g;
    }
  }
}

Side BrokenSpace::resolve(double x, Side side, int dir) const {
  if (side == Side::omega2) {
    if (!cfg_.has_interface || x < cfg_.g_left || x > cfg_.g_right) {
      throw std::invalid_argument(
          "eval: omega2 trace requested outside the overlapped region");
    }
    return Side::omega2;
  }
  if (side == Side::omega1 || !cfg_.has_interface) return Side::omega1;
  if (x > cfg_.g_left && x < cfg_.g_right) return Side::omega2;
  // On the interface the approach direction picks the side.
  if (x == cfg_.g_left && dir > 0) return Side::omega2;
  if (x == cfg_.g_right && dir < 0) return Side::omega2;
  return Side::omega1;
}

BrokenSpace::CellDofs BrokenSpace::background_cell(int cell) const {
  const Mesh1D& m = cfg_.mesh0;
  CellDofs cd;
  cd.dof = {bg_node_to_dof_[cell], bg_node_to_dof_[cell + 1]};
  cd.node_x = {m.cell_left(cell), m.cell_right(cell)};
  cd.grad_left = -1.0 / m.cell_size(cell);
  return cd;
}

BrokenSpace::CellDofs BrokenSpace::overlapping_cell(int cell) const {
  const Mesh1D& m = cfg_.mesh_g;
  CellDofs cd;
  cd.dof = {ov_node_to_dof_[cell], ov_node_to_dof_[cell + 1]};
  cd.node_x = {m.cell_left(cell), m.cell_right(cell)};
  cd.grad_left = -1.0 / m.cell_size(cell);
  return cd;
}

BrokenSpace::Stencil BrokenSpace::value_stencil(double x, Side side,
                                                int dir) const {
  const Side s = resolve(x, side, dir);
  const CellDofs cd = s == Side::omega1
                          ? background_cell(cfg_.mesh0.locate(x, dir))
                          : overlapping_cell(cfg_.mesh_g.locate(x, dir));
  const double h = cd.node_x[1] - cd.node_x[0];
  Stencil st;
  if (cd.dof[0] >= 0) st.push_back({cd.dof[0], (cd.node_x[1] - x) / h});
  if (cd.dof[1] >= 0) st.push_back({cd.dof[1], (x - cd.node_x[0]) / h});
  return st;
}

BrokenSpace::Stencil BrokenSpace::gradient_stencil(double x, Side side,
                                                   int dir) const {
  const Side s = resolve(x, side, dir);
  const CellDofs cd = s == Side::omega1
                          ? background_cell(cfg_.mesh0.locate(x, dir))
                          : overlapping_cell(cfg_.mesh_g.locate(x, dir));
  Stencil st;
  if (cd.dof[0] >= 0) st.push_back({cd.dof[0], cd.grad_left});
  if (cd.dof[1] >= 0) st.push_back({cd.dof[1], -cd.grad_left});
  return st;
}

double BrokenSpace::eval(std::span<const double> coeffs, double x,
                         Side side) const {
  if (static_cast<int>(coeffs.size()) != dim()) {
    throw std::invalid_argument("eval: coefficient size mismatch");
  }
  double v = 0.0;
  for (const StencilEntry& e : value_stencil(x, side)) {
    v += coeffs[e.dof] * e.weight;
  }
  return v;
}

double BrokenSpace::eval_grad(std::span<const double> coeffs, double x,
                              Side side, int dir) const {
  if (static_cast<int>(coeffs.size()) != dim()) {
    throw std::invalid_argument("eval_grad: coefficient size mismatch");
  }
  double v = 0.0;
  for (const StencilEntry& e : gradient_stencil(x, side, dir)) {
    v += coeffs[e.dof] * e.weight;
  }
  return v;
}

std::vector<double> BrokenSpace::interpolate(
    const std::function<double(double)>& f) const {
  std::vector<double> c(dim());
  for (int g = 0; g < dim(); ++g) c[g] = f(dofs_[g].x);
  return c;
}

BrokenSpace build_space(const CutConfig& cfg) { return BrokenSpace(cfg); }

BrokenSpace build_space(const CutConfig& cfg, const Mesh1D& mesh0,
                        const Mesh1D& mesh_g) {
  if (mesh0.nodes != cfg.mesh0.nodes ||
      (cfg.has_interface && mesh_g.nodes != cfg.mesh_g.nodes)) {
    throw std::invalid_argument("build_space: meshes inconsistent with config");
  }
  return BrokenSpace(cfg);
}

SparseMatrix cross_mass(const BrokenSpace& from, const BrokenSpace& to) {
  const std::vector<PairSegment> parts =
      partition_pairwise(from.config(), to.config());
  const QuadRule rule = make_rule(RuleKind::gauss2);

  std::vector<Triplet> tr;
  tr.reserve(parts.size() * 4);
  for (const PairSegment& seg : parts) {
    const BrokenSpace::CellDofs cf = seg.region_n == 2
                                         ? from.overlapping_cell(seg.cell_g_n)
                                         : from.background_cell(seg.cell0);
    const BrokenSpace::CellDofs ct = seg.region_m == 2
                                         ? to.overlapping_cell(seg.cell_g_m)
                                         : to.background_cell(seg.cell0);
    const double hf = cf.node_x[1] - cf.node_x[0];
    const double ht = ct.node_x[1] - ct.node_x[0];
    const double len = seg.length();
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = seg.a + rule.nodes[q] * len;
      const double w = rule.weights[q] * len;
      const std::array<double, 2> vf = {(cf.node_x[1] - x) / hf,
                                        (x - cf.node_x[0]) / hf};
      const std::array<double, 2> vt = {(ct.node_x[1] - x) / ht,
                                        (x - ct.node_x[0]) / ht};
      for (int i = 0; i < 2; ++i) {
        if (ct.dof[i] < 0) continue;
        for (int j = 0; j < 2; ++j) {
          if (cf.dof[j] < 0) continue;
          tr.push_back({ct.dof[i], cf.dof[j], w * vt[i] * vf[j]});
        }
      }
    }
  }
  return SparseMatrix::from_triplets(to.dim(), from.dim(), std::move(tr));
}

}  // namespace cutheat
