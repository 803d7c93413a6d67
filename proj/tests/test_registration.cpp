// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "tsdmd/errors.hpp"
#include "tsdmd/registration.hpp"
#include "tsdmd/serial_reference.hpp"
#include "tsdmd/transform.hpp"

using namespace tsdmd;

namespace {

CellField step(const Grid& g, double a, double b) {
  IndicatorTerm t;
  t.box[0] = {a, b};
  return project_to_cells({{{t}}}, g);
}

CellField smooth_field(const Grid& g, double shift) {
  IndicatorTerm t;
  t.box = {g.bounds(0), g.bounds(1)};
  t.sines = {RaisedSine{0, shift}};
  if (g.dim() == 2) t.sines.push_back(RaisedSine{1, 2 * shift});
  return project_to_cells({{{t}}}, g);
}

// best single-mode amplitude on a uniform grid of candidates
double grid_search_amplitude(const CellField& u_t, const CellField& u_ref, double lo, double hi, double step) {
  DisplacementField f = DisplacementField::zero(u_t.grid, 1);
  double best = lo, best_val = INFINITY;
  for (double a = lo; a <= hi; a += step) {
    f.coeffs[0] = a;
    const double v = serial::objective(f, u_t, u_ref, 1e-3).total;
    if (v < best_val) {
      best_val = v;
      best = a;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("registration") {

TEST_CASE("basis_eval") {
  CHECK(basis_eval(1, 3, 1, 1, {0.5, 0}) == doctest::Approx(0.25));
  CHECK(basis_eval(2, 3, 1, 1, {0.5, 0.5}) == doctest::Approx(0.0625));
  for (int j = 1; j <= 4; ++j) {
    CHECK(basis_eval(1, 4, j, 1, {0.0, 0}) == 0.0);
    CHECK(basis_eval(1, 4, j, 1, {1.0, 0}) == 0.0);
    CHECK(basis_eval(2, 4, j, 2, {0.3, 1.0}) == 0.0);
  }
  // l_2(xi) = 2 xi - 1
  CHECK(basis_eval(1, 2, 2, 1, {0.75, 0}) == doctest::Approx(0.5 * 0.75 * 0.25));
  CHECK_THROWS_AS(basis_eval(1, 3, 4, 1, {0.5, 0}), ConfigError);
  CHECK_THROWS_AS(basis_eval(1, 3, 0, 1, {0.5, 0}), ConfigError);
}

TEST_CASE("displacement_eval") {
  const Grid g = build_grid_1d({0, 2}, 10);
  DisplacementField f = DisplacementField::zero(g, 3);
  CHECK(displacement_eval(f, {0.7, 0})[0] == 0.0);
  f.coeffs = {1.0, 0.0, 0.0};
  CHECK(displacement_eval(f, {1.0, 0})[0] == doctest::Approx(0.5));
  f.coeffs = {0.3, -0.7, 1.1};
  CHECK(displacement_eval(f, {0.0, 0})[0] == 0.0);
  CHECK(displacement_eval(f, {2.0, 0})[0] == 0.0);

  const Grid g2 = build_grid_2d({-0.1, 1.4}, {-0.1, 1.4}, 5, 5);
  DisplacementField f2 = DisplacementField::zero(g2, 2);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double& c : f2.coeffs) c = u(rng);
  for (double y : {-0.1, 0.3, 1.4}) {
    const Point p = displacement_eval(f2, {-0.1, y});
    CHECK(p[0] == 0.0);
    CHECK(p[1] == 0.0);
  }
}

TEST_CASE("objective examples") {
  const Grid g = build_grid_1d({0, 1}, 200);
  const CellField ref = step(g, 0.4, 0.6);
  DisplacementField zero = DisplacementField::zero(g, 1);
  const ObjectiveValue same = objective(zero, ref, ref, 1e-3);
  CHECK(same.matching == 0.0);
  CHECK(same.regularization == 0.0);
  CHECK(same.total == 0.0);

  CellField plus = ref;
  for (double& v : plus.values) v += 1.0;
  const ObjectiveValue off = objective(zero, plus, ref, 1e-3);
  CHECK(off.matching == doctest::Approx(1.0));
  CHECK(off.regularization == 0.0);

  const CellField moved = step(g, 0.45, 0.65);
  const double a = grid_search_amplitude(moved, ref, -0.5, 0.1, 1e-3);
  DisplacementField best = zero;
  best.coeffs[0] = a;
  CHECK(objective(best, moved, ref, 1e-3).total < objective(zero, moved, ref, 1e-3).total);
}

TEST_CASE("separable kernel matches the pointwise objective and its FD gradient") {
  for (const Grid& g : {build_grid_1d({-0.2, 2.0}, 300), build_grid_2d({-0.1, 1.4}, {-0.1, 1.4}, 40, 36)}) {
    const int order = g.dim() == 1 ? 4 : 3;
    const CellField ref = smooth_field(g, 0.0), ut = smooth_field(g, 0.07);
    DisplacementField f = DisplacementField::zero(g, order);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.02, 0.02);
    for (double& c : f.coeffs) c = u(rng);

    const RegistrationKernel kernel(g, order);
    std::vector<double> grad(f.coeffs.size());
    const ObjectiveValue k = kernel.evaluate(f.coeffs, ut, ref, 1e-3, grad);
    const ObjectiveValue s = serial::objective(f, ut, ref, 1e-3);
    CHECK(k.matching == doctest::Approx(s.matching).epsilon(1e-10));
    CHECK(k.regularization == doctest::Approx(s.regularization).epsilon(1e-10));

    const std::vector<double> fd = serial::objective_gradient_fd(f, ut, ref, 1e-3);
    double scale = 0.0;
    for (double v : fd) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < fd.size(); ++i) CHECK(std::abs(grad[i] - fd[i]) <= 1e-4 * scale);
  }
}

TEST_CASE("fold penalty gradient") {
  const Grid g = build_grid_1d({0, 1}, 200);
  const CellField ref = smooth_field(g, 0.0), ut = smooth_field(g, 0.1);
  const RegistrationKernel kernel(g, 3);
  std::vector<double> x = {1.5, 0.8, -0.4};  // folds: det dips below the floor
  CHECK(kernel.min_forward_det(x) < 0.5);
  const FoldPenalty fold{0.5, 10.0};
  std::vector<double> grad(3), dummy;
  const ObjectiveValue v = kernel.evaluate(x, ut, ref, 1e-3, grad, fold);
  CHECK(v.penalty > 0.0);
  CHECK(v.total == doctest::Approx(v.matching + v.regularization + v.penalty));
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<double> xp = x, xm = x;
    xp[i] += 1e-6;
    xm[i] -= 1e-6;
    const double fd = (kernel.evaluate(xp, ut, ref, 1e-3, dummy, fold).total -
                       kernel.evaluate(xm, ut, ref, 1e-3, dummy, fold).total) / 2e-6;
    CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("min_forward_det matches the pointwise Jacobian") {
  const Grid g = build_grid_2d({-0.1, 1.4}, {0.0, 1.0}, 30, 20);
  DisplacementField f = DisplacementField::zero(g, 3);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (double& c : f.coeffs) c = u(rng);
  CHECK(RegistrationKernel(g, 3).min_forward_det(f.coeffs) == doctest::Approx(min_forward_jacobian(f, g)).epsilon(1e-10));
}

TEST_CASE("register_snapshot") {
  const Grid g = build_grid_1d({0, 1}, 200);
  const CellField ref = step(g, 0.4, 0.6);

  SUBCASE("identical snapshots stay at zero") {
    const RegistrationResult r = register_snapshot(ref, ref, 3, 1e-3, DisplacementField::zero(g, 3));
    CHECK(r.field.norm() <= 1e-8);
    CHECK_FALSE(r.warning);
  }
  SUBCASE("shifted step") {
    const CellField moved = step(g, 0.45, 0.65);
    const RegistrationResult r = register_snapshot(moved, ref, 1, 1e-3, DisplacementField::zero(g, 1));
    const double a = grid_search_amplitude(moved, ref, -0.5, 0.1, 1e-3);
    CHECK(r.field.coeffs[0] == doctest::Approx(a).epsilon(0.02));
    CHECK(displacement_eval(r.field, {0.4, 0})[0] == doctest::Approx(-0.05).epsilon(0.1));
    CHECK(displacement_eval(r.field, {0.6, 0})[0] == doctest::Approx(-0.05).epsilon(0.1));
    CHECK(r.final.matching <= 0.1 * r.initial.matching);
    CHECK(r.final.total <= r.initial.total);
    CHECK(min_forward_jacobian(r.field, g) > 0.0);
  }
  SUBCASE("returned objective never exceeds the initial one") {
    const CellField moved = step(g, 0.3, 0.75);
    DisplacementField init = DisplacementField::zero(g, 4);
    init.coeffs = {0.2, -0.1, 0.05, 0.3};
    const RegistrationResult r = register_snapshot(moved, ref, 4, 1e-3, init);
    CHECK(r.final.total <= r.initial.total);
  }
}

TEST_CASE("register_trajectory") {
  const Grid g = build_grid_1d({0, 1}, 200);
  const CellField ref = step(g, 0.4, 0.6);

  SUBCASE("constant in time") {
    SnapshotSet s;
    s.grid = g;
    s.times = {0.0, 0.1, 0.2, 0.3};
    s.fields.assign(4, ref);
    const TransformSet ts = register_trajectory(s, 0.15, 3, 1e-3);
    CHECK(ts.ref_index == 1);
    for (const DisplacementField& f : ts.fields) CHECK(f.norm() <= 1e-8);
  }
  SUBCASE("reference plus one shifted copy") {
    SnapshotSet s;
    s.grid = g;
    s.times = {0.0, 1.0};
    s.fields = {ref, step(g, 0.45, 0.65)};
    const TransformSet ts = register_trajectory(s, 0.0, 1, 1e-3);
    CHECK(ts.ref_index == 0);
    CHECK(ts.fields[0].norm() <= 1e-8);
    const double a = grid_search_amplitude(s.fields[1], ref, -0.5, 0.1, 1e-3);
    CHECK(ts.fields[1].coeffs[0] == doctest::Approx(a).epsilon(0.02));
    CHECK(ts.warning_count() == 0);
  }
  SUBCASE("t_ref outside the window") {
    SnapshotSet s;
    s.grid = g;
    s.times = {0.0, 1.0};
    s.fields = {ref, ref};
    CHECK_THROWS_AS(register_trajectory(s, 2.0, 1, 1e-3), ConfigError);
  }
}

TEST_CASE("advected step: transformed snapshots keep their jumps in place") {
  ProblemSpec p = advection_problem();
  const Grid g = build_grid_1d(p.domain[0], 800);
  const SnapshotSet s = solve(p, g, 41);
  const TransformSet ts = register_trajectory(s, 0.4, 4, 1e-3);
  CHECK(ts.fields[ts.ref_index].norm() <= 1e-8);
  // right jump: where g crosses 1/2 to the right of the plateau; reference at 0.7
  std::vector<double> loc;
  for (std::size_t k = 0; k < s.fields.size(); ++k) {
    const CellField gk = transformed_snapshot(s.fields[k], ts.fields[k]);
    for (std::size_t i = g.num_cells() - 1; i > 0; --i)
      if (gk.values[i] >= 0.5) {
        loc.push_back(g.cell_center(i)[0]);
        break;
      }
  }
  const auto [lo, hi] = std::minmax_element(loc.begin(), loc.end());
  CHECK(*hi - *lo <= 2.0 * g.h(0));
  // boundary points are fixed by every transform
  for (const DisplacementField& f : ts.fields) {
    CHECK(forward_eval(f, {g.bounds(0).lo, 0})[0] == g.bounds(0).lo);
    CHECK(forward_eval(f, {g.bounds(0).hi, 0})[0] == g.bounds(0).hi);
  }
}

TEST_CASE("closest_index") {
  const std::vector<double> t = {0.0, 0.25, 0.5, 0.75};
  CHECK(closest_index(t, 0.2) == 1);
  CHECK(closest_index(t, 0.375) == 1);  // tie goes to the earlier index
  CHECK(closest_index(t, 0.4) == 2);
  CHECK(closest_index(t, 9.0) == 3);
}

}  // TEST_SUITE
