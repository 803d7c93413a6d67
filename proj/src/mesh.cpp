// SPDX-License-Identifier: Apache-2.0
#include "tsdmd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tsdmd/errors.hpp"

namespace tsdmd {

std::size_t Grid::num_cells() const {
  return static_cast<std::size_t>(cells_[0]) * (dim_ == 2 ? cells_[1] : 1);
}

std::size_t Grid::num_vertices() const {
  return static_cast<std::size_t>(vertices(0)) * vertices(1);
}

double Grid::cell_volume() const { return dim_ == 2 ? h_[0] * h_[1] : h_[0]; }

double Grid::domain_volume() const {
  return dim_ == 2 ? bounds_[0].length() * bounds_[1].length() : bounds_[0].length();
}

double Grid::diameter() const {
  if (dim_ == 1) return bounds_[0].length();
  return std::hypot(bounds_[0].length(), bounds_[1].length());
}

double Grid::vertex_coord(int axis, int i) const {
  // last vertex pinned to the upper bound
  return i == cells_[axis] ? bounds_[axis].hi : bounds_[axis].lo + i * h_[axis];
}

Point Grid::cell_center(std::size_t cell) const {
  const int nx = cells_[0];
  const int i = static_cast<int>(cell % nx);
  const int j = static_cast<int>(cell / nx);
  return {center_coord(0, i), dim_ == 2 ? center_coord(1, j) : 0.0};
}

Point Grid::vertex(std::size_t v) const {
  const int nx = cells_[0] + 1;
  const int i = static_cast<int>(v % nx);
  const int j = static_cast<int>(v / nx);
  return {vertex_coord(0, i), dim_ == 2 ? vertex_coord(1, j) : 0.0};
}

bool Grid::is_boundary_vertex(std::size_t v) const {
  const int nx = cells_[0] + 1;
  const int i = static_cast<int>(v % nx);
  const int j = static_cast<int>(v / nx);
  if (i == 0 || i == cells_[0]) return true;
  return dim_ == 2 && (j == 0 || j == cells_[1]);
}

Point Grid::clamp(Point x) const {
  for (int a = 0; a < dim_; ++a) x[a] = std::clamp(x[a], bounds_[a].lo, bounds_[a].hi);
  return x;
}

Grid build_grid(std::span<const Interval> bounds, std::span<const int> cells) {
  if (bounds.empty() || bounds.size() > 2 || bounds.size() != cells.size())
    throw ConfigError("grid: need 1 or 2 axes with matching bounds and cell counts");
  Grid g;
  g.dim_ = static_cast<int>(bounds.size());
  for (int a = 0; a < g.dim_; ++a) {
    const Interval& b = bounds[a];
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi))
      throw ConfigError("grid: degenerate interval on axis " + std::to_string(a));
    if (cells[a] < 1)
      throw ConfigError("grid: non-positive cell count on axis " + std::to_string(a));
    g.bounds_[a] = b;
    g.cells_[a] = cells[a];
    g.h_[a] = b.length() / cells[a];
  }
  return g;
}

Grid build_grid_1d(Interval bounds, int cells) {
  return build_grid(std::span<const Interval>(&bounds, 1), std::span<const int>(&cells, 1));
}

Grid build_grid_2d(Interval bx, Interval by, int nx, int ny) {
  const std::array<Interval, 2> b{bx, by};
  const std::array<int, 2> c{nx, ny};
  return build_grid(b, c);
}

CellField::CellField(Grid g, int c)
    : grid(std::move(g)), components(c), values(grid.num_cells() * c, 0.0) {}

CellField::CellField(Grid g, int c, std::vector<double> v)
    : grid(std::move(g)), components(c), values(std::move(v)) {
  if (values.size() != grid.num_cells() * static_cast<std::size_t>(c))
    throw ConfigError("CellField: value count does not match grid");
}

VertexField::VertexField(Grid g)
    : grid(std::move(g)), values(grid.num_vertices() * grid.dim(), 0.0) {}

VertexField::VertexField(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.num_vertices() * static_cast<std::size_t>(grid.dim()))
    throw ConfigError("VertexField: value count does not match grid");
}

VertexField identity_vertex_field(const Grid& grid) {
  VertexField f(grid);
  for (std::size_t v = 0; v < f.size(); ++v) {
    const Point p = grid.vertex(v);
    for (int c = 0; c < grid.dim(); ++c) f.at(c, v) = p[c];
  }
  return f;
}

namespace {

double overlap_fraction(const Interval& box, double lo, double hi) {
  const double w = std::min(box.hi, hi) - std::max(box.lo, lo);
  return w > 0.0 ? w / (hi - lo) : 0.0;
}

}  // namespace

CellField project_to_cells(const InitialData& data, const Grid& grid) {
  const int nc = static_cast<int>(data.components.size());
  if (nc < 1) throw ConfigError("initial data: no components");
  CellField f(grid, nc);
  const int ny = grid.dim() == 2 ? grid.cells(1) : 1;
  for (int c = 0; c < nc; ++c) {
    for (const IndicatorTerm& term : data.components[c]) {
      for (const RaisedSine& s : term.sines)
        if (s.axis < 0 || s.axis >= grid.dim())
          throw ConfigError("initial data: sine factor on unsupported axis");
      for (int j = 0; j < ny; ++j) {
        double fy = 1.0;
        if (grid.dim() == 2) {
          const double lo = grid.vertex_coord(1, j), hi = grid.vertex_coord(1, j + 1);
          fy = overlap_fraction(term.box[1], lo, hi);
          if (fy == 0.0) continue;
        }
        for (int i = 0; i < grid.cells(0); ++i) {
          const double lo = grid.vertex_coord(0, i), hi = grid.vertex_coord(0, i + 1);
          const double fx = overlap_fraction(term.box[0], lo, hi);
          if (fx == 0.0) continue;
          double smooth = 1.0;
          const Point xc = grid.cell_center(grid.cell_index(i, j));
          for (const RaisedSine& s : term.sines)
            smooth *= std::sin(2.0 * std::numbers::pi * (xc[s.axis] + s.shift)) + 1.0;
          f.at(c, grid.cell_index(i, j)) += term.scale * fx * fy * smooth;
        }
      }
    }
  }
  return f;
}

std::size_t locate_cell(const Grid& grid, const Point& x) {
  std::array<int, 2> idx{0, 0};
  for (int a = 0; a < grid.dim(); ++a) {
    const double s = (x[a] - grid.bounds(a).lo) / grid.h(a);
    idx[a] = std::clamp(static_cast<int>(std::floor(s)), 0, grid.cells(a) - 1);
  }
  return grid.cell_index(idx[0], idx[1]);
}

namespace {

struct AxisWeights {
  int i0 = 0;
  int count = 1;
  double frac = 0.0;
  double dfrac = 0.0;
};

AxisWeights axis_weights(const Grid& grid, int axis, double x) {
  AxisWeights w;
  const int n = grid.cells(axis);
  if (n == 1) return w;
  w.count = 2;
  const double s = (x - grid.bounds(axis).lo) / grid.h(axis) - 0.5;
  if (s <= 0.0) {
    w.i0 = 0;
  } else if (s >= n - 1) {
    w.i0 = n - 2;
    w.frac = 1.0;
  } else {
    w.i0 = static_cast<int>(std::floor(s));
    w.frac = s - w.i0;
    w.dfrac = 1.0 / grid.h(axis);
  }
  return w;
}

}  // namespace

InterpStencil cell_stencil(const Grid& grid, const Point& xin) {
  InterpStencil st;
  const AxisWeights wx = axis_weights(grid, 0, xin[0]);
  AxisWeights wy;
  if (grid.dim() == 2) wy = axis_weights(grid, 1, xin[1]);
  for (int b = 0; b < wy.count; ++b) {
    const double fy = wy.count == 1 ? 1.0 : (b == 0 ? 1.0 - wy.frac : wy.frac);
    const double dfy = wy.count == 1 ? 0.0 : (b == 0 ? -wy.dfrac : wy.dfrac);
    for (int a = 0; a < wx.count; ++a) {
      const double fx = wx.count == 1 ? 1.0 : (a == 0 ? 1.0 - wx.frac : wx.frac);
      const double dfx = wx.count == 1 ? 0.0 : (a == 0 ? -wx.dfrac : wx.dfrac);
      const int k = st.count++;
      st.cell[k] = grid.cell_index(wx.i0 + a, wy.i0 + b);
      st.weight[k] = fx * fy;
      st.dweight[0][k] = dfx * fy;
      st.dweight[1][k] = fx * dfy;
    }
  }
  return st;
}

namespace {

void require_finite(const Grid& grid, const Point& x) {
  for (int a = 0; a < grid.dim(); ++a)
    if (!std::isfinite(x[a])) throw ConfigError("field evaluation at a non-finite point");
}

}  // namespace

double eval_cell_field(const CellField& f, int component, const Point& x, InterpMode mode) {
  require_finite(f.grid, x);
  const auto vals = f.component(component);
  if (mode == InterpMode::nearest) return vals[locate_cell(f.grid, x)];
  const InterpStencil st = cell_stencil(f.grid, x);
  double v = 0.0;
  for (int k = 0; k < st.count; ++k) v += st.weight[k] * vals[st.cell[k]];
  return v;
}

std::vector<double> eval_cell_field(const CellField& f, const Point& x, InterpMode mode) {
  std::vector<double> out(f.components);
  for (int c = 0; c < f.components; ++c) out[c] = eval_cell_field(f, c, x, mode);
  return out;
}

Point eval_vertex_field(const VertexField& f, const Point& xin) {
  const Grid& g = f.grid;
  require_finite(g, xin);
  const Point x = g.clamp(xin);
  std::array<int, 2> e{0, 0};
  std::array<double, 2> t{0.0, 0.0};
  for (int a = 0; a < g.dim(); ++a) {
    const double s = (x[a] - g.bounds(a).lo) / g.h(a);
    e[a] = std::clamp(static_cast<int>(std::floor(s)), 0, g.cells(a) - 1);
    t[a] = std::clamp((x[a] - g.vertex_coord(a, e[a])) / g.h(a), 0.0, 1.0);
  }
  Point out{0.0, 0.0};
  if (g.dim() == 1) {
    for (int c = 0; c < 1; ++c)
      out[c] = (1.0 - t[0]) * f.at(c, e[0]) + t[0] * f.at(c, e[0] + 1);
    return out;
  }
  const std::size_t v00 = g.vertex_index(e[0], e[1]);
  const std::size_t v10 = g.vertex_index(e[0] + 1, e[1]);
  const std::size_t v01 = g.vertex_index(e[0], e[1] + 1);
  const std::size_t v11 = g.vertex_index(e[0] + 1, e[1] + 1);
  for (int c = 0; c < 2; ++c) {
    out[c] = (1.0 - t[0]) * (1.0 - t[1]) * f.at(c, v00) + t[0] * (1.0 - t[1]) * f.at(c, v10) +
             (1.0 - t[0]) * t[1] * f.at(c, v01) + t[0] * t[1] * f.at(c, v11);
  }
  return out;
}

}  // namespace tsdmd
