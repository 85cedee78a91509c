#include "cutheat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace cutheat {

namespace {

constexpr double kBreakpointEps = 1e-13;
constexpr double kDegenerateSegment = 1e-14;

// Snapping must reach above the breakpoint/segment filter scales, or a cut
// sliver shorter than those thresholds loses its quadrature support while its
// dofs stay active. Positions accumulate absolute roundoff of this order, so
// the window gets an absolute floor (disabled together with snapping for
// tol = 0).
constexpr double kSnapFloor = 1e-11;

double overlap_length(double a0, double b0, double a1, double b1) {
  return std::max(0.0, std::min(b0, b1) - std::max(a0, a1));
}

}  // namespace

double Mesh1D::max_cell_size() const {
  double m = 0.0;
  for (int k = 0; k < cell_count(); ++k) m = std::max(m, cell_size(k));
  return m;
}

double Mesh1D::min_cell_size() const {
  double m = cell_size(0);
  for (int k = 1; k < cell_count(); ++k) m = std::min(m, cell_size(k));
  return m;
}

int Mesh1D::locate(double x, int dir) const {
  const int cells = cell_count();
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  int cell = static_cast<int>(it - nodes.begin()) - 1;
  cell = std::min(std::max(cell, 0), cells - 1);
  if (dir < 0 && x == nodes[cell] && cell > 0) --cell;
  return cell;
}

Mesh1D Mesh1D::placed_at(double new_left) const {
  Mesh1D out;
  out.nodes.reserve(nodes.size());
  const double shift = new_left - nodes.front();
  for (double x : nodes) out.nodes.push_back(x + shift);
  out.nodes.front() = new_left;  // avoid roundoff drift at the anchor
  return out;
}

void Mesh1D::validate() const {
  if (nodes.size() < 2) throw std::invalid_argument("mesh needs >= 2 nodes");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) {
      throw std::invalid_argument("mesh nodes must be strictly increasing");
    }
  }
}

Mesh1D build_uniform_mesh(double a, double b, int n_cells) {
  if (!(a < b)) throw std::invalid_argument("build_uniform_mesh: need a < b");
  if (n_cells < 1) {
    throw std::invalid_argument("build_uniform_mesh: need n_cells >= 1");
  }
  Mesh1D mesh;
  mesh.nodes.resize(n_cells + 1);
  for (int i = 0; i <= n_cells; ++i) {
    mesh.nodes[i] = a + (b - a) * (static_cast<double>(i) / n_cells);
  }
  mesh.nodes.front() = a;
  mesh.nodes.back() = b;
  return mesh;
}

double SlabTimeline::min_slab_length() const {
  double m = slab_length(1);
  for (int n = 2; n <= slab_count(); ++n) m = std::min(m, slab_length(n));
  return m;
}

void SlabTimeline::validate() const {
  if (times.size() < 2) throw std::invalid_argument("timeline needs a slab");
  if (times.front() != 0.0) throw std::invalid_argument("timeline starts at 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("timeline must be strictly increasing");
    }
  }
}

SlabTimeline build_timeline(double t_final, int n_slabs) {
  if (!(t_final > 0.0)) throw std::invalid_argument("build_timeline: T <= 0");
  if (n_slabs < 1) throw std::invalid_argument("build_timeline: N < 1");
  SlabTimeline tl;
  tl.times.resize(n_slabs + 1);
  for (int n = 0; n <= n_slabs; ++n) {
    tl.times[n] = t_final * (static_cast<double>(n) / n_slabs);
  }
  tl.times.front() = 0.0;
  tl.times.back() = t_final;
  return tl;
}

InterfaceTrajectory InterfaceTrajectory::constant(double a0, double len,
                                                  double mu) {
  InterfaceTrajectory t;
  t.start = a0;
  t.length = len;
  t.velocity = [mu](double) { return mu; };
  return t;
}

InterfaceTrajectory InterfaceTrajectory::sampled(
    double a0, double len, std::function<double(double)> mu) {
  InterfaceTrajectory t;
  t.start = a0;
  t.length = len;
  t.velocity = std::move(mu);
  return t;
}

std::vector<double> InterfaceTrajectory::positions(
    const SlabTimeline& timeline) const {
  const int n_slabs = timeline.slab_count();
  std::vector<double> a(n_slabs + 1);
  a[0] = start;
  for (int n = 1; n <= n_slabs; ++n) {
    a[n] = a[n - 1] + velocity(timeline.slab_end(n)) * timeline.slab_length(n);
  }
  for (int n = 0; n <= n_slabs; ++n) {
    if (!(a[n] > 0.0) || !(a[n] + length < 1.0)) {
      throw std::domain_error("interface leaves the domain at slab " +
                              std::to_string(n) + ": G = (" +
                              std::to_string(a[n]) + ", " +
                              std::to_string(a[n] + length) + ")");
    }
  }
  return a;
}

std::pair<double, double> slab_interface(const InterfaceTrajectory& traj,
                                         const SlabTimeline& timeline, int n) {
  if (n < 1 || n > timeline.slab_count()) {
    throw std::invalid_argument("slab_interface: slab index out of range");
  }
  const std::vector<double> a = traj.positions(timeline);
  return {a[n], a[n] + traj.length};
}

double CutConfig::omega1_measure() const {
  double m = 0.0;
  for (const Segment& s : omega1) m += s.length();
  return m;
}

double CutConfig::omega2_measure() const {
  double m = 0.0;
  for (const Segment& s : omega2) m += s.length();
  return m;
}

double CutConfig::overlap_measure() const {
  double m = 0.0;
  for (const Segment& s : overlap) m += s.length();
  return m;
}

namespace {

// Snap x to the nearest node of mesh0 when it lies within tol times the local
// cell size (or the absolute floor); returns the (possibly unchanged)
// coordinate.
double snap_to_node(const Mesh1D& mesh0, double x, double tol) {
  const int cell = mesh0.locate(x);
  const double h = mesh0.cell_size(cell);
  const double window = tol > 0.0 ? std::max(tol * h, kSnapFloor) : 0.0;
  const double dl = std::abs(x - mesh0.cell_left(cell));
  const double dr = std::abs(x - mesh0.cell_right(cell));
  if (dl <= window && dl <= dr) return mesh0.cell_left(cell);
  if (dr <= window) return mesh0.cell_right(cell);
  return x;
}

bool is_node_of(const Mesh1D& mesh, double x) {
  return std::binary_search(mesh.nodes.begin(), mesh.nodes.end(), x);
}

std::vector<double> sorted_breakpoints(std::vector<double> pts) {
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts) {
    if (out.empty() || p - out.back() > kBreakpointEps) out.push_back(p);
  }
  return out;
}

}  // namespace

CutConfig build_cut_config(const Mesh1D& mesh0, const Mesh1D& mesh_g,
                           std::pair<double, double> g, int slab_index,
                           double tol) {
  mesh0.validate();
  mesh_g.validate();
  if (tol < 0.0) throw std::invalid_argument("build_cut_config: tol < 0");
  const auto [ga, gb] = g;
  if (!(mesh0.left() < ga) || !(gb < mesh0.right()) || !(ga < gb)) {
    throw std::domain_error("build_cut_config: G not strictly inside domain");
  }
  const double span_tol =
      std::max(tol * mesh0.max_cell_size(), 1e-14 * (mesh0.right() - mesh0.left()));
  if (std::abs(mesh_g.left() - ga) > span_tol ||
      std::abs(mesh_g.right() - gb) > span_tol) {
    throw std::invalid_argument(
        "build_cut_config: overlapping mesh does not span G");
  }

  CutConfig cfg;
  cfg.slab_index = slab_index;
  cfg.has_interface = true;
  cfg.mesh0 = mesh0;
  cfg.mesh_g = mesh_g;
  cfg.g_left = snap_to_node(mesh0, ga, tol);
  cfg.g_right = snap_to_node(mesh0, gb, tol);

  // Gamma points. A snapped point sits on a node and cuts no cell; its owner
  // (for h_K) is the adjacent cell on the Omega_2 side.
  for (int side = 0; side < 2; ++side) {
    GammaPoint& gp = cfg.gamma[side];
    gp.x = side == 0 ? cfg.g_left : cfg.g_right;
    gp.normal = side == 0 ? +1 : -1;
    gp.snapped = is_node_of(mesh0, gp.x);
    if (gp.snapped) {
      gp.owner_cell = mesh0.locate(gp.x, side == 0 ? +1 : -1);
    } else {
      gp.owner_cell = mesh0.locate(gp.x);
    }
    gp.h_k = mesh0.cell_size(gp.owner_cell);
  }

  // Omega_1: background cells clipped against (left, g_left) u (g_right, right).
  const std::array<Interval, 2> outside = {
      Interval{mesh0.left(), cfg.g_left}, Interval{cfg.g_right, mesh0.right()}};
  for (const Interval& part : outside) {
    for (int k = mesh0.locate(part.a); k <= mesh0.locate(part.b, -1); ++k) {
      const double a = std::max(part.a, mesh0.cell_left(k));
      const double b = std::min(part.b, mesh0.cell_right(k));
      if (b - a > kDegenerateSegment) {
        cfg.omega1.push_back({a, b, k, -1});
      }
    }
  }

  // Omega_2: (g_left, g_right) split at nodes of both meshes so that every
  // segment has one owner cell per mesh.
  {
    std::vector<double> pts = {cfg.g_left, cfg.g_right};
    for (double x : mesh0.nodes) {
      if (x > cfg.g_left && x < cfg.g_right) pts.push_back(x);
    }
    for (double x : mesh_g.nodes) {
      if (x > cfg.g_left && x < cfg.g_right) pts.push_back(x);
    }
    const std::vector<double> bp = sorted_breakpoints(std::move(pts));
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      if (bp[i + 1] - bp[i] <= kDegenerateSegment) continue;
      const double mid = 0.5 * (bp[i] + bp[i + 1]);
      cfg.omega2.push_back(
          {bp[i], bp[i + 1], mesh0.locate(mid), mesh_g.locate(mid)});
    }
  }

  // Overlap: parts of cut background cells inside Omega_2. Snapped points cut
  // no cell, so an aligned interface yields a zero-measure overlap.
  std::set<int> cut_cells;
  for (const GammaPoint& gp : cfg.gamma) {
    if (!gp.snapped) cut_cells.insert(gp.owner_cell);
  }
  for (const Segment& s : cfg.omega2) {
    if (cut_cells.count(s.cell0)) cfg.overlap.push_back(s);
  }

  // Covered background dofs: zero-measure support intersection with
  // Omega_1 u Omega_O.
  for (int i = 0; i < mesh0.node_count(); ++i) {
    const double sa = mesh0.nodes[std::max(i - 1, 0)];
    const double sb = mesh0.nodes[std::min(i + 1, mesh0.node_count() - 1)];
    double measure = 0.0;
    for (const Interval& part : outside) {
      measure += overlap_length(sa, sb, part.a, part.b);
    }
    for (const Segment& s : cfg.overlap) {
      measure += overlap_length(sa, sb, s.a, s.b);
    }
    if (measure <= 1e-12 * (sb - sa)) {
      cfg.covered_background_dofs.push_back(i);
    }
  }
  return cfg;
}

CutConfig build_uncut_config(const Mesh1D& mesh0) {
  mesh0.validate();
  CutConfig cfg;
  cfg.has_interface = false;
  cfg.mesh0 = mesh0;
  cfg.g_left = cfg.g_right = mesh0.right();  // empty overlapped region
  for (int k = 0; k < mesh0.cell_count(); ++k) {
    cfg.omega1.push_back({mesh0.cell_left(k), mesh0.cell_right(k), k, -1});
  }
  return cfg;
}

std::vector<PairSegment> partition_pairwise(const CutConfig& cfg_n,
                                            const CutConfig& cfg_m) {
  if (cfg_n.mesh0.left() != cfg_m.mesh0.left() ||
      cfg_n.mesh0.right() != cfg_m.mesh0.right()) {
    throw std::invalid_argument("partition_pairwise: different domains");
  }
  std::vector<double> pts(cfg_n.mesh0.nodes);
  pts.insert(pts.end(), cfg_m.mesh0.nodes.begin(), cfg_m.mesh0.nodes.end());
  for (const CutConfig* cfg : {&cfg_n, &cfg_m}) {
    if (!cfg->has_interface) continue;
    pts.push_back(cfg->g_left);
    pts.push_back(cfg->g_right);
    for (double x : cfg->mesh_g.nodes) {
      if (x > cfg->mesh0.left() && x < cfg->mesh0.right()) pts.push_back(x);
    }
  }
  const std::vector<double> bp = sorted_breakpoints(std::move(pts));

  std::vector<PairSegment> out;
  out.reserve(bp.size());
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    if (bp[i + 1] - bp[i] <= kDegenerateSegment) continue;
    PairSegment seg;
    seg.a = bp[i];
    seg.b = bp[i + 1];
    const double mid = 0.5 * (seg.a + seg.b);
    seg.region_n = cfg_n.in_omega2(mid) ? 2 : 1;
    seg.region_m = cfg_m.in_omega2(mid) ? 2 : 1;
    seg.cell0 = cfg_n.mesh0.locate(mid);
    seg.cell_g_n = seg.region_n == 2 ? cfg_n.mesh_g.locate(mid) : -1;
    seg.cell_g_m = seg.region_m == 2 ? cfg_m.mesh_g.locate(mid) : -1;
    out.push_back(seg);
  }
  return out;
}

}  // namespace cutheat
