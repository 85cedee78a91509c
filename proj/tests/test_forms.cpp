#include <stdexcept>
#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "cutheat/forms.hpp"
#include "test_util.hpp"

using namespace cutheat;
using namespace cutheat::testing;

namespace {

BrokenSpace aligned_space() {
  const Mesh1D mesh0 = build_uniform_mesh(0.0, 1.0, 10);
  const Mesh1D mesh_g = build_uniform_mesh(0.2, 0.4, 2);
  return build_space(build_cut_config(mesh0, mesh_g, {0.2, 0.4}, 1));
}

BrokenSpace cut_space(int cells0, double a = 0.125, double b = 0.375) {
  const Mesh1D mesh0 = build_uniform_mesh(0.0, 1.0, cells0);
  const int cells_g =
      std::max(1, static_cast<int>(std::lround((b - a) * cells0)));
  const Mesh1D mesh_g = build_uniform_mesh(a, b, cells_g);
  return build_space(build_cut_config(mesh0, mesh_g, {a, b}, 1));
}

double form_value(const SparseMatrix& m, std::span<const double> left,
                  std::span<const double> right) {
  return dot(left, m.apply(right));
}

}  // namespace

TEST_SUITE_BEGIN("forms");

TEST_CASE("parameter validation") {
  NitscheParams params;
  params.gamma = -1.0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params.gamma = 10.0;
  params.omega1 = 0.7;
  params.omega2 = 0.7;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params.omega2 = 0.3;
  CHECK_NOTHROW(params.validate());
}

TEST_CASE("stiffness without an interface is the standard P1 matrix") {
  const BrokenSpace space =
      build_space(build_uncut_config(build_uniform_mesh(0.0, 1.0, 4)));
  const SparseMatrix a = assemble_stiffness(space, {});
  const double h = 0.25;
  for (int i = 0; i < 3; ++i) {
    CHECK(a.coeff(i, i) == doctest::Approx(2.0 / h).epsilon(1e-13));
    if (i > 0) CHECK(a.coeff(i, i - 1) == doctest::Approx(-1.0 / h).epsilon(1e-13));
    if (i < 2) CHECK(a.coeff(i, i + 1) == doctest::Approx(-1.0 / h).epsilon(1e-13));
  }
}

TEST_CASE("continuous linear profile across an aligned interface") {
  const BrokenSpace space = aligned_space();
  const NitscheParams params;
  const std::vector<double> v = space.interpolate([](double x) { return x; });

  // The interpolant of x with eliminated boundary values has gradient 1
  // everywhere except the last cell, where it drops from 0.9 to 0:
  // integral of (v')^2 = 0.9 * 1 + 0.1 * 81 = 9.0. All interface jumps
  // vanish, so the form reduces to that integral.
  const SparseMatrix a = assemble_stiffness(space, params);
  CHECK(form_value(a, v, v) == doctest::Approx(9.0).epsilon(1e-12));

  // The energy norm only adds the weighted normal averages, h * 1 per point.
  const double energy = energy_norm(space, v, params);
  CHECK(energy == doctest::Approx(std::sqrt(9.2)).epsilon(1e-12));
}

TEST_CASE("stiffness is symmetric") {
  for (int cells : {10, 20, 40}) {
    const BrokenSpace space = cut_space(cells);
    const SparseMatrix a = assemble_stiffness(space, {});
    CHECK(a.max_asymmetry() < 1e-12 * std::max(1.0, a.max_abs()));
  }
}

TEST_CASE("discrete coercivity with gamma = 10") {
  std::mt19937 rng(42);
  const NitscheParams params;
  double global_min = 1e300;
  for (int cells : {10, 20, 40, 80, 160, 320, 640}) {
    const BrokenSpace space = cut_space(cells);
    const SparseMatrix a = assemble_stiffness(space, params);
    double level_min = 1e300;
    for (int trial = 0; trial < 100; ++trial) {
      const std::vector<double> v = random_vector(rng, space.dim());
      const double e = energy_norm(space, v, params);
      if (e == 0.0) continue;
      level_min = std::min(level_min, form_value(a, v, v) / (e * e));
    }
    CHECK(level_min > 0.0);
    global_min = std::min(global_min, level_min);
  }
  // The observed constant stays well away from zero under refinement.
  CHECK(global_min > 0.01);
}

TEST_CASE("mass matrix") {
  SUBCASE("standard tridiagonal pattern without an interface") {
    const BrokenSpace space =
        build_space(build_uncut_config(build_uniform_mesh(0.0, 1.0, 4)));
    const SparseMatrix m = assemble_mass(space);
    const double h = 0.25;
    for (int i = 0; i < 3; ++i) {
      CHECK(m.coeff(i, i) == doctest::Approx(2.0 * h / 3.0).epsilon(1e-13));
      if (i > 0) CHECK(m.coeff(i, i - 1) == doctest::Approx(h / 6.0).epsilon(1e-13));
    }
  }

  SUBCASE("cut mass is SPD with eigenvalues scaling like h") {
    // Cell counts chosen so the interface sits at the same relative position
    // inside its cut cell on every level; the smallest eigenvalue depends on
    // that cut fraction, not just on h.
    const std::vector<int> levels = {10, 18, 34};
    std::vector<double> min_eigs;
    std::vector<double> max_eigs;
    for (int cells : levels) {
      const BrokenSpace space = cut_space(cells);
      const SparseMatrix m = assemble_mass(space);
      const std::vector<double> eig =
          symmetric_eigenvalues(to_dense(m), space.dim());
      double lo = eig[0];
      double hi = eig[0];
      for (double e : eig) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
      }
      CHECK(lo > 0.0);  // no zero rows: covered dofs are excluded
      min_eigs.push_back(lo);
      max_eigs.push_back(hi);
    }
    for (std::size_t i = 1; i < levels.size(); ++i) {
      const double h_ratio =
          static_cast<double>(levels[i]) / static_cast<double>(levels[i - 1]);
      CHECK(max_eigs[i - 1] / max_eigs[i] ==
            doctest::Approx(h_ratio).epsilon(0.35));
      CHECK(min_eigs[i - 1] / min_eigs[i] ==
            doctest::Approx(h_ratio).epsilon(0.35));
    }
  }
}

TEST_CASE("pairwise form") {
  const NitscheParams params;

  SUBCASE("matching configurations on continuous inputs reduce to gradients") {
    const BrokenSpace space = aligned_space();
    const SparseMatrix special = assemble_special(space, space, params);
    const SparseMatrix a = assemble_stiffness(space, params);
    for (auto profile : {+[](double x) { return x; },
                         +[](double x) { return std::sin(2.0 * x); },
                         +[](double x) { return x * x - 0.3 * x; }}) {
      const std::vector<double> v = space.interpolate(profile);
      const std::vector<double> w =
          space.interpolate([&](double x) { return profile(1.0 - x); });
      // Jump-free inputs: the pairwise form agrees with the stiffness form.
      CHECK(form_value(special, w, v) ==
            doctest::Approx(form_value(a, w, v)).epsilon(1e-11));
    }
  }

  SUBCASE("discrete continuity constant stays bounded under refinement") {
    std::mt19937 rng(11);
    std::vector<double> constants;
    for (int cells : {10, 20, 40, 80}) {
      const BrokenSpace space_n = cut_space(cells);
      const double shift_amount = 0.4 / cells;
      const Mesh1D mesh_g_m = build_uniform_mesh(
          0.125 + shift_amount, 0.375 + shift_amount,
          std::max(1, static_cast<int>(std::lround(0.25 * cells))));
      const BrokenSpace space_m = build_space(build_cut_config(
          space_n.config().mesh0, mesh_g_m,
          {0.125 + shift_amount, 0.375 + shift_amount}, 2));
      const SparseMatrix special = assemble_special(space_n, space_m, params);
      double worst = 0.0;
      for (int trial = 0; trial < 30; ++trial) {
        const std::vector<double> v = random_vector(rng, space_n.dim());
        const std::vector<double> w = random_vector(rng, space_m.dim());
        const double en = energy_norm(space_n, v, params);
        const double em = energy_norm(space_m, w, params);
        if (en == 0.0 || em == 0.0) continue;
        worst = std::max(worst,
                         std::abs(form_value(special, w, v)) / (en * em));
      }
      constants.push_back(worst);
    }
    double lo = constants[0];
    double hi = constants[0];
    for (double c : constants) {
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    CHECK(hi < 10.0);
    CHECK(hi / lo < 3.0);
  }

  SUBCASE("support away from both interfaces gives plain stiffness entries") {
    const BrokenSpace space_n = cut_space(10);
    const Mesh1D mesh_g_m = build_uniform_mesh(0.15, 0.4, 5);
    const BrokenSpace space_m = build_space(
        build_cut_config(space_n.config().mesh0, mesh_g_m, {0.15, 0.4}, 2));
    const SparseMatrix special = assemble_special(space_n, space_m, params);
    const int row = space_m.background_dof(8);  // node 0.8
    const int col = space_n.background_dof(8);
    const int col_left = space_n.background_dof(7);
    REQUIRE(row >= 0);
    REQUIRE(col >= 0);
    CHECK(special.coeff(row, col) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(special.coeff(row, col_left) == doctest::Approx(-10.0).epsilon(1e-12));
  }
}

TEST_CASE("energy norm basics") {
  const BrokenSpace space = cut_space(10);
  const NitscheParams params;
  const std::vector<double> zero(space.dim(), 0.0);
  CHECK(energy_norm(space, zero, params) == 0.0);

  std::mt19937 rng(5);
  const std::vector<double> v = random_vector(rng, space.dim());
  CHECK(energy_norm(space, v, params) > 0.0);
}

TEST_CASE("discrete inverse inequality for the interface average") {
  std::mt19937 rng(17);
  const NitscheParams params;
  std::vector<double> constants;
  for (int cells : {10, 20, 40, 80, 160}) {
    const BrokenSpace space = cut_space(cells);
    const CutConfig& cfg = space.config();
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const std::vector<double> v = random_vector(rng, space.dim());
      double avg_sq = 0.0;
      for (const GammaPoint& gp : cfg.gamma) {
        const int dir1 = gp.normal > 0 ? -1 : +1;
        const double avg =
            params.omega1 * space.eval_grad(v, gp.x, Side::omega1, dir1) +
            params.omega2 * space.eval_grad(v, gp.x, Side::omega2, -dir1);
        avg_sq += gp.h_k * avg * avg;
      }
      double grad_sq = 0.0;
      for (const Segment& s : cfg.omega1) {
        const double g = space.eval_grad(v, s.midpoint(), Side::omega1);
        grad_sq += s.length() * g * g;
      }
      for (const Segment& s : cfg.omega2) {
        const double g = space.eval_grad(v, s.midpoint(), Side::omega2);
        grad_sq += s.length() * g * g;
      }
      for (const Segment& s : cfg.overlap) {
        const double d = space.eval_grad(v, s.midpoint(), Side::omega1) -
                         space.eval_grad(v, s.midpoint(), Side::omega2);
        grad_sq += s.length() * d * d;
      }
      if (grad_sq > 0.0) worst = std::max(worst, avg_sq / grad_sq);
    }
    constants.push_back(worst);
  }
  for (double c : constants) CHECK(c < 10.0);
}

TEST_CASE("jump identity") {
  CHECK(jump_identity_check(3.0, 1.0, 2.0, 4.0, 0.5, 0.5).first ==
        doctest::Approx(2.0));
  CHECK(jump_identity_check(3.0, 1.0, 2.0, 4.0, 0.5, 0.5).second ==
        doctest::Approx(2.0));
  CHECK(jump_identity_check(3.0, 1.0, 2.0, 4.0, 1.0, 0.0).first ==
        doctest::Approx(2.0));
  CHECK(jump_identity_check(3.0, 1.0, 2.0, 4.0, 1.0, 0.0).second ==
        doctest::Approx(2.0));

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> val(-5.0, 5.0);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double wp = weight(rng);
    const auto [lhs, rhs] =
        jump_identity_check(val(rng), val(rng), val(rng), val(rng), wp, 1.0 - wp);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }

  CHECK_THROWS_AS(jump_identity_check(1, 2, 3, 4, 0.6, 0.6),
                  std::invalid_argument);
}

TEST_SUITE_END();
