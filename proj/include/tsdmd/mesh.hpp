// SPDX-License-Identifier: Apache-2.0
//
// Uniform 1D/2D grids, the piecewise-constant cell space and the
// vertex-based continuous multilinear space defined over them.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace tsdmd {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

using Point = std::array<double, 2>;

/// Uniform tensor grid. In 1D the second axis is unused (one cell, unit width).
class Grid {
 public:
  Grid() = default;

  int dim() const { return dim_; }
  const Interval& bounds(int axis) const { return bounds_[axis]; }
  int cells(int axis) const { return cells_[axis]; }
  double h(int axis) const { return h_[axis]; }

  std::size_t num_cells() const;
  std::size_t num_vertices() const;
  int vertices(int axis) const { return axis < dim_ ? cells_[axis] + 1 : 1; }
  double cell_volume() const;
  double domain_volume() const;
  double diameter() const;

  std::size_t cell_index(int i, int j = 0) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(cells_[0]) * j;
  }
  std::size_t vertex_index(int i, int j = 0) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(cells_[0] + 1) * j;
  }

  double center_coord(int axis, int i) const { return bounds_[axis].lo + (i + 0.5) * h_[axis]; }
  double vertex_coord(int axis, int i) const;
  Point cell_center(std::size_t cell) const;
  Point vertex(std::size_t vertex) const;
  bool is_boundary_vertex(std::size_t vertex) const;

  /// Clamp a point to the closed domain.
  Point clamp(Point x) const;

  bool operator==(const Grid&) const = default;

  friend Grid build_grid(std::span<const Interval> bounds, std::span<const int> cells);

 private:
  int dim_ = 1;
  std::array<Interval, 2> bounds_{Interval{0.0, 1.0}, Interval{0.0, 1.0}};
  std::array<int, 2> cells_{1, 1};
  std::array<double, 2> h_{1.0, 1.0};
};

/// Builds a uniform grid; throws ConfigError for degenerate input.
Grid build_grid(std::span<const Interval> bounds, std::span<const int> cells);
Grid build_grid_1d(Interval bounds, int cells);
Grid build_grid_2d(Interval bx, Interval by, int nx, int ny);

/// Piecewise-constant field; values are component-major (values[c * N + i]).
struct CellField {
  Grid grid;
  int components = 1;
  std::vector<double> values;

  CellField() = default;
  CellField(Grid g, int c);
  CellField(Grid g, int c, std::vector<double> v);

  std::size_t size() const { return grid.num_cells(); }
  double& at(int c, std::size_t i) { return values[c * size() + i]; }
  double at(int c, std::size_t i) const { return values[c * size() + i]; }
  std::span<const double> component(int c) const {
    return {values.data() + c * size(), size()};
  }
  std::span<double> component(int c) { return {values.data() + c * size(), size()}; }
};

/// Continuous multilinear field with dim components (a map Omega -> R^d);
/// values are component-major (values[c * Ntilde + v]).
struct VertexField {
  Grid grid;
  std::vector<double> values;

  VertexField() = default;
  explicit VertexField(Grid g);
  VertexField(Grid g, std::vector<double> v);

  int components() const { return grid.dim(); }
  std::size_t size() const { return grid.num_vertices(); }
  double& at(int c, std::size_t v) { return values[c * size() + v]; }
  double at(int c, std::size_t v) const { return values[c * size() + v]; }
};

/// Vertex field whose value is the vertex coordinate.
VertexField identity_vertex_field(const Grid& grid);

// Initial-data descriptors -------------------------------------------------

/// Factor (sin(2 pi (x_axis + shift)) + 1) multiplying an indicator.
struct RaisedSine {
  int axis = 0;
  double shift = 0.0;
};

/// scale * chi_box(x) * prod(raised sines).
struct IndicatorTerm {
  std::array<Interval, 2> box{};
  double scale = 1.0;
  std::vector<RaisedSine> sines;
};

/// One list of terms per solution component; the field is their sum.
struct InitialData {
  std::vector<std::vector<IndicatorTerm>> components;
};

/// L2-type projection onto cells: exact overlap fractions for indicators,
/// cell-midpoint sampling of smooth factors.
CellField project_to_cells(const InitialData& data, const Grid& grid);

enum class InterpMode { nearest, multilinear };

/// Containing cell of x (half-open cells, last cell closed), after clamping.
std::size_t locate_cell(const Grid& grid, const Point& x);

/// Value of one component at x. Out-of-domain points are clamped.
double eval_cell_field(const CellField& f, int component, const Point& x,
                       InterpMode mode = InterpMode::multilinear);
std::vector<double> eval_cell_field(const CellField& f, const Point& x,
                                    InterpMode mode = InterpMode::multilinear);

/// Multilinear interpolation weights of cell-center samples at x. Writes up to
/// four (cell, weight) pairs and returns the count. Constant extrapolation
/// beyond the outermost centers.
struct InterpStencil {
  std::array<std::size_t, 4> cell{};
  std::array<double, 4> weight{};
  // d(weight)/dx_axis for each entry; zero where the coordinate is clamped
  std::array<std::array<double, 4>, 2> dweight{};
  int count = 0;
};
InterpStencil cell_stencil(const Grid& grid, const Point& x);

Point eval_vertex_field(const VertexField& f, const Point& x);

}  // namespace tsdmd
