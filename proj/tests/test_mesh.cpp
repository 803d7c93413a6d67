// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "tsdmd/errors.hpp"
#include "tsdmd/mesh.hpp"

using namespace tsdmd;

TEST_SUITE("mesh") {

TEST_CASE("build_grid sizes and spacing") {
  const Grid g1 = build_grid_1d({-0.2, 2.0}, 4000);
  CHECK(g1.num_cells() == 4000);
  CHECK(g1.num_vertices() == 4001);
  CHECK(g1.h(0) == doctest::Approx(0.00055).epsilon(1e-12));

  const Grid g2 = build_grid_2d({0, 1}, {0, 1}, 300, 300);
  CHECK(g2.num_cells() == 90000);
  CHECK(g2.num_vertices() == 301 * 301);

  const Grid g3 = build_grid_1d({0, 1}, 1);
  CHECK(g3.num_cells() == 1);
  CHECK(g3.num_vertices() == 2);
  CHECK(g3.cell_center(0)[0] == 0.5);
}

TEST_CASE("build_grid rejects degenerate input") {
  CHECK_THROWS_AS(build_grid_1d({0, 1}, 0), ConfigError);
  CHECK_THROWS_AS(build_grid_1d({1, 1}, 4), ConfigError);
  CHECK_THROWS_AS(build_grid_2d({0, 1}, {2, 1}, 4, 4), ConfigError);
}

TEST_CASE("vertices and centers lie in the closed domain") {
  const Grid g = build_grid_2d({-0.1, 1.4}, {-0.1, 1.4}, 7, 5);
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    for (int a = 0; a < 2; ++a) {
      CHECK(g.vertex(v)[a] >= g.bounds(a).lo);
      CHECK(g.vertex(v)[a] <= g.bounds(a).hi);
    }
  CHECK(g.vertex(g.num_vertices() - 1)[0] == 1.4);
}

TEST_CASE("indicator projection uses exact overlap fractions") {
  // cell [0.5, 0.6) overlaps [0, 0.54] by 0.04 -> fraction 0.4
  const Grid g = build_grid_1d({0, 1}, 10);
  IndicatorTerm t;
  t.box[0] = {0.0, 0.54};
  const CellField f = project_to_cells({{{t}}}, g);
  CHECK(f.values[4] == doctest::Approx(1.0));
  CHECK(f.values[5] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(f.values[6] == 0.0);
}

TEST_CASE("2D indicator projection matches a brute-force overlap oracle") {
  const Grid g = build_grid_2d({-0.1, 1.4}, {0.0, 1.0}, 7, 9);
  IndicatorTerm t;
  t.box = {Interval{0.13, 0.5}, Interval{0.2, 0.77}};
  const CellField f = project_to_cells({{{t}}}, g);
  const int sub = 400;
  for (int j = 0; j < 9; ++j)
    for (int i = 0; i < 7; ++i) {
      int hits = 0;
      for (int q = 0; q < sub; ++q)
        for (int p = 0; p < sub; ++p) {
          const double x = g.bounds(0).lo + (i + (p + 0.5) / sub) * g.h(0);
          const double y = g.bounds(1).lo + (j + (q + 0.5) / sub) * g.h(1);
          hits += x >= 0.13 && x <= 0.5 && y >= 0.2 && y <= 0.77;
        }
      CHECK(f.values[g.cell_index(i, j)] == doctest::Approx(double(hits) / (sub * sub)).epsilon(6e-3));
    }
}

TEST_CASE("projection of an indicator integrates to the measure of A within the domain") {
  const Grid g = build_grid_2d({-0.1, 1.4}, {-0.1, 1.4}, 37, 23);
  IndicatorTerm t;
  t.box = {Interval{-0.5, 0.5}, Interval{0.0, 0.5}};  // partly outside
  const CellField f = project_to_cells({{{t}}}, g);
  double mass = 0.0;
  for (double v : f.values) mass += v * g.cell_volume();
  CHECK(mass == doctest::Approx(0.6 * 0.5).epsilon(1e-12));
}

TEST_CASE("full-domain indicator and sine bumps") {
  const Grid g = build_grid_1d({-0.3, 3.0}, 33);
  IndicatorTerm all;
  all.box[0] = {-0.3, 3.0};
  for (double v : project_to_cells({{{all}}}, g).values) CHECK(v == doctest::Approx(1.0));

  IndicatorTerm w1;
  w1.box[0] = {-0.2, 0.3};
  w1.sines = {RaisedSine{0, 0.2}};
  const CellField f = project_to_cells({{{w1}}}, g);
  // cell 10 is [0.7, 0.8), outside the support
  CHECK(f.values[10] == 0.0);
}

TEST_CASE("eval_cell_field") {
  const Grid g = build_grid_1d({0, 1}, 2);
  const CellField c(g, 1, {3.0, 3.0});
  CHECK(eval_cell_field(c, 0, {0.3, 0}, InterpMode::nearest) == 3.0);
  CHECK(eval_cell_field(c, 0, {0.9, 0}, InterpMode::multilinear) == 3.0);

  const CellField f(g, 1, {0.0, 1.0});
  CHECK(eval_cell_field(f, 0, {0.5, 0}, InterpMode::multilinear) == doctest::Approx(0.5));
  CHECK(eval_cell_field(f, 0, {0.5, 0}, InterpMode::nearest) == 1.0);
  // constant extrapolation beyond the outer centers, clamping outside
  CHECK(eval_cell_field(f, 0, {0.1, 0}, InterpMode::multilinear) == 0.0);
  CHECK(eval_cell_field(f, 0, {7.0, 0}, InterpMode::multilinear) == 1.0);
  CHECK_THROWS_AS(eval_cell_field(f, 0, {NAN, 0}), ConfigError);
}

TEST_CASE("eval_vertex_field") {
  const Grid g = build_grid_1d({0, 1}, 10);
  const VertexField id = identity_vertex_field(g);
  CHECK(eval_vertex_field(id, {0.37, 0})[0] == doctest::Approx(0.37));

  VertexField shifted = id;
  for (double& v : shifted.values) v += 0.1;
  CHECK(eval_vertex_field(shifted, {0.3, 0})[0] == doctest::Approx(0.4));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  const Grid g2 = build_grid_2d({0, 2}, {-1, 1}, 6, 4);
  VertexField r(g2);
  for (double& v : r.values) v = u(rng);
  for (std::size_t v = 0; v < g2.num_vertices(); ++v) {
    const Point p = eval_vertex_field(r, g2.vertex(v));
    CHECK(p[0] == r.at(0, v));
    CHECK(p[1] == r.at(1, v));
  }
}

TEST_CASE("vertex interpolation reproduces affine maps") {
  const Grid g = build_grid_2d({-0.1, 1.4}, {0.0, 2.0}, 9, 5);
  VertexField f(g);
  auto affine = [](const Point& x) { return Point{0.3 + 1.2 * x[0] - 0.4 * x[1], -1.0 + 0.2 * x[0] + 0.7 * x[1]}; };
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const Point a = affine(g.vertex(v));
    f.at(0, v) = a[0];
    f.at(1, v) = a[1];
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(-0.1, 1.4), uy(0.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    const Point x{ux(rng), uy(rng)};
    const Point p = eval_vertex_field(f, x), a = affine(x);
    CHECK(p[0] == doctest::Approx(a[0]).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(a[1]).epsilon(1e-12));
  }
}

TEST_CASE("multilinear weights form a partition of unity") {
  std::mt19937_64 rng(11);
  for (const Grid& g : {build_grid_1d({-0.2, 2.0}, 17), build_grid_2d({-0.1, 1.4}, {-0.1, 1.4}, 8, 13)}) {
    std::uniform_real_distribution<double> ux(g.bounds(0).lo - 0.1, g.bounds(0).hi + 0.1),
        uy(g.bounds(1).lo - 0.1, g.bounds(1).hi + 0.1);
    for (int k = 0; k < 500; ++k) {
      const InterpStencil st = cell_stencil(g, {ux(rng), g.dim() == 2 ? uy(rng) : 0.0});
      double s = 0.0;
      for (int i = 0; i < st.count; ++i) s += st.weight[i];
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
  }
}

}  // TEST_SUITE
