#include "cutheat/timestepping.hpp"

#include <cmath>
#include <stdexcept>

namespace cutheat {

namespace {

constexpr double kResidualTol = 1e-9;

std::vector<double> source_moments(const BrokenSpace& space,
                                   const std::function<double(double, double)>& f,
                                   double t) {
  return l2_moments(space, [&](double x) { return f(x, t); });
}

}  // namespace

void RunSetup::validate() const {
  mesh0.validate();
  timeline.validate();
  params.validate();
  if (q != 0 && q != 1) throw std::invalid_argument("dG order q must be 0 or 1");
  if (geometry_tol < 0.0) throw std::invalid_argument("geometry tol < 0");
  if (use_interface) {
    mesh_g_ref.validate();
    const double span = mesh_g_ref.right() - mesh_g_ref.left();
    if (std::abs(span - traj.length) > 1e-12) {
      throw std::invalid_argument(
          "overlapping mesh span does not match the interface length");
    }
  }
}

SlabSystem assemble_slab(int q, std::shared_ptr<const BrokenSpace> space,
                         const SlabData& data, const SlabTimeline& timeline,
                         int n, const NitscheParams& params,
                         const std::function<double(double, double)>& source) {
  if (q != 0 && q != 1) throw std::invalid_argument("assemble_slab: q in {0,1}");
  if (n < 1 || n > timeline.slab_count()) {
    throw std::invalid_argument("assemble_slab: slab index out of range");
  }
  SlabSystem sys;
  sys.n = n;
  sys.q = q;
  sys.k = timeline.slab_length(n);
  sys.space = std::move(space);
  sys.stiffness = assemble_stiffness(*sys.space, params);
  sys.mass = assemble_mass(*sys.space);

  if (const auto* trace = std::get_if<DiscreteTrace>(&data)) {
    if (trace->space == nullptr) {
      throw std::invalid_argument("assemble_slab: previous space missing");
    }
    sys.coupling_matrix = cross_mass(*trace->space, *sys.space);
    sys.coupling_vector = sys.coupling_matrix->apply(trace->coeffs);
  } else {
    const auto& init = std::get<InitialFunction>(data);
    sys.coupling_vector = l2_moments(*sys.space, init.u0);
  }

  const int dim = sys.space->dim();
  const double k = sys.k;
  const double t0 = timeline.slab_start(n);
  const double t1 = timeline.slab_end(n);

  if (q == 0) {
    sys.block = SparseMatrix::combine(1.0, sys.mass, k, sys.stiffness);
    sys.rhs = sys.coupling_vector;
    if (source) {
      const std::vector<double> f_mid =
          source_moments(*sys.space, source, 0.5 * (t0 + t1));
      for (int i = 0; i < dim; ++i) sys.rhs[i] += k * f_mid[i];
    }
    return sys;
  }

  // dG(1) with Lagrange nodes at the slab endpoints. The temporal couplings
  // of the bilinear blocks are integrated exactly:
  //   int l0' la dt = -1/2, int l1' la dt = 1/2,
  //   int la lb dt  = k/3 on the diagonal and k/6 off it,
  // and the jump term adds the mass block at (test, trial) = (0, 0).
  const double mass_coef[2][2] = {{0.5, 0.5}, {-0.5, 0.5}};
  const double stiff_coef[2][2] = {{k / 3.0, k / 6.0}, {k / 6.0, k / 3.0}};

  std::vector<Triplet> tr;
  tr.reserve(4 * (sys.mass.values().size() + sys.stiffness.values().size()));
  auto spread = [&](const SparseMatrix& mat, const double coef[2][2]) {
    const auto& rp = mat.row_ptr();
    const auto& ci = mat.col_idx();
    const auto& vals = mat.values();
    for (int r = 0; r < mat.rows(); ++r) {
      for (int e = rp[r]; e < rp[r + 1]; ++e) {
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            if (coef[a][b] != 0.0) {
              tr.push_back({2 * r + a, 2 * ci[e] + b, coef[a][b] * vals[e]});
            }
          }
        }
      }
    }
  };
  spread(sys.mass, mass_coef);
  spread(sys.stiffness, stiff_coef);
  sys.block = SparseMatrix::from_triplets(2 * dim, 2 * dim, std::move(tr));

  sys.rhs.assign(2 * dim, 0.0);
  for (int i = 0; i < dim; ++i) sys.rhs[2 * i] = sys.coupling_vector[i];
  if (source) {
    // Three-point Lobatto in time against both temporal test functions.
    const std::vector<double> f0 = source_moments(*sys.space, source, t0);
    const std::vector<double> fm =
        source_moments(*sys.space, source, 0.5 * (t0 + t1));
    const std::vector<double> f1 = source_moments(*sys.space, source, t1);
    for (int i = 0; i < dim; ++i) {
      sys.rhs[2 * i] += k * (f0[i] / 6.0 + fm[i] / 3.0);
      sys.rhs[2 * i + 1] += k * (fm[i] / 3.0 + f1[i] / 6.0);
    }
  }
  return sys;
}

BrokenSpace Trajectory::space_at(int n) const {
  if (n < 1 || n > setup.timeline.slab_count()) {
    throw std::invalid_argument("space_at: slab index out of range");
  }
  if (!setup.use_interface) {
    return build_space(build_uncut_config(setup.mesh0));
  }
  const double a = positions[n];
  const Mesh1D mesh_g = setup.mesh_g_ref.placed_at(a);
  return build_space(build_cut_config(setup.mesh0, mesh_g,
                                      {a, a + setup.traj.length}, n,
                                      setup.geometry_tol));
}

const std::vector<double>& Trajectory::trace_at(int n) const {
  if (history.empty()) throw std::logic_error("trace_at: history not kept");
  return history.at(n - 1).node_coeffs.back();
}

Trajectory march(const RunSetup& setup, const HeatProblem& problem,
                 const MarchOptions& options) {
  setup.validate();
  Trajectory out;
  out.setup = setup;
  if (setup.use_interface) {
    out.positions = setup.traj.positions(setup.timeline);
  }

  const int n_slabs = setup.timeline.slab_count();
  std::shared_ptr<const BrokenSpace> prev_space;
  std::vector<double> prev_trace;

  for (int n = 1; n <= n_slabs; ++n) {
    try {
      std::shared_ptr<const BrokenSpace> space;
      if (setup.use_interface) {
        const double a = out.positions[n];
        const Mesh1D mesh_g = setup.mesh_g_ref.placed_at(a);
        space = std::make_shared<BrokenSpace>(
            build_cut_config(setup.mesh0, mesh_g, {a, a + setup.traj.length},
                             n, setup.geometry_tol));
      } else {
        space = std::make_shared<BrokenSpace>(build_uncut_config(setup.mesh0));
      }

      SlabData data;
      if (n > 1) {
        data = DiscreteTrace{prev_space.get(), prev_trace};
      } else if (problem.discrete_initial) {
        data = DiscreteTrace{problem.discrete_initial->space.get(),
                             problem.discrete_initial->coeffs};
      } else {
        data = InitialFunction{problem.initial.value};
      }

      SlabSystem sys = assemble_slab(setup.q, space, data, setup.timeline, n,
                                     setup.params, problem.source);

      BandedMatrix banded = BandedMatrix::from_sparse(sys.block);
      banded.factorize();
      const std::vector<double> solution = banded.solve(sys.rhs);
      if (backward_error(sys.block, solution, sys.rhs) > kResidualTol) {
        throw MarchError(n, "slab solve exceeded the residual tolerance");
      }

      const int dim = space->dim();
      std::vector<std::vector<double>> node_coeffs(setup.q + 1);
      if (setup.q == 0) {
        node_coeffs[0] = solution;
      } else {
        node_coeffs[0].resize(dim);
        node_coeffs[1].resize(dim);
        for (int i = 0; i < dim; ++i) {
          node_coeffs[0][i] = solution[2 * i];
          node_coeffs[1][i] = solution[2 * i + 1];
        }
      }

      if (options.observer) {
        const SlabView view{sys,
                            node_coeffs,
                            n > 1 ? prev_space.get() : nullptr,
                            n > 1 ? std::span<const double>(prev_trace)
                                  : std::span<const double>(),
                            setup.timeline.slab_start(n),
                            setup.timeline.slab_end(n)};
        options.observer(view);
      }
      if (options.keep_history) {
        out.history.push_back(
            {setup.use_interface ? out.positions[n] : 0.0, node_coeffs});
      }

      prev_trace = std::move(node_coeffs.back());
      prev_space = std::move(space);
    } catch (const MarchError&) {
      throw;
    } catch (const std::exception& e) {
      throw MarchError(n, e.what());
    }
  }

  out.final_space = std::move(prev_space);
  out.final_trace = std::move(prev_trace);
  return out;
}

}  // namespace cutheat
