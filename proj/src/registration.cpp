// SPDX-License-Identifier: Apache-2.0
#include "tsdmd/registration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tsdmd/errors.hpp"
#include "tsdmd/legendre.hpp"

namespace tsdmd {

DisplacementField DisplacementField::zero(const Grid& grid, int order) {
  if (order < 1) throw ConfigError("displacement order must be >= 1");
  DisplacementField f;
  f.dim = grid.dim();
  f.order = order;
  f.box = {grid.bounds(0), grid.bounds(1)};
  f.coeffs.assign(f.dim * f.per_component(), 0.0);
  return f;
}

std::size_t DisplacementField::per_component() const {
  return dim == 2 ? static_cast<std::size_t>(order) * order : static_cast<std::size_t>(order);
}

double DisplacementField::norm() const {
  double s = 0.0;
  for (double c : coeffs) s += c * c;
  return std::sqrt(s);
}

double basis_eval(int dim, int order, int j, int k, const Point& xi) {
  if (j < 1 || j > order || (dim == 2 && (k < 1 || k > order)))
    throw ConfigError("basis_eval: index out of range");
  std::vector<double> b(order);
  bump_basis(order, xi[0], b, {}, {});
  double v = b[j - 1];
  if (dim == 2) {
    bump_basis(order, xi[1], b, {}, {});
    v *= b[k - 1];
  }
  return v;
}

namespace {

struct PointTables {
  std::array<std::vector<double>, 2> b, db, ddb;
};

PointTables point_tables(const DisplacementField& f, const Point& x) {
  PointTables t;
  for (int a = 0; a < 2; ++a) {
    const int m = a < f.dim ? f.order : 1;
    t.b[a].assign(m, 1.0);
    t.db[a].assign(m, 0.0);
    t.ddb[a].assign(m, 0.0);
    if (a < f.dim) {
      const double xi = (x[a] - f.box[a].lo) / f.box[a].length();
      bump_basis(m, xi, t.b[a], t.db[a], t.ddb[a]);
    }
  }
  return t;
}

}  // namespace

Point displacement_eval(const DisplacementField& f, const Point& x) {
  const PointTables t = point_tables(f, x);
  const int m2 = f.dim == 2 ? f.order : 1;
  Point out{0.0, 0.0};
  for (int c = 0; c < f.dim; ++c) {
    double s = 0.0;
    for (int k = 0; k < m2; ++k)
      for (int j = 0; j < f.order; ++j) s += f.coeff(c, j, k) * t.b[0][j] * t.b[1][k];
    out[c] = f.box[c].length() * s;
  }
  return out;
}

std::array<std::array<double, 2>, 2> displacement_jacobian(const DisplacementField& f,
                                                           const Point& x) {
  const PointTables t = point_tables(f, x);
  const int m2 = f.dim == 2 ? f.order : 1;
  std::array<std::array<double, 2>, 2> jac{};
  for (int c = 0; c < f.dim; ++c) {
    double s0 = 0.0, s1 = 0.0;
    for (int k = 0; k < m2; ++k)
      for (int j = 0; j < f.order; ++j) {
        s0 += f.coeff(c, j, k) * t.db[0][j] * t.b[1][k];
        s1 += f.coeff(c, j, k) * t.b[0][j] * t.db[1][k];
      }
    jac[c][0] = f.box[c].length() / f.box[0].length() * s0;
    if (f.dim == 2) jac[c][1] = f.box[c].length() / f.box[1].length() * s1;
  }
  return jac;
}

Point displacement_laplacian(const DisplacementField& f, const Point& x) {
  const PointTables t = point_tables(f, x);
  const int m2 = f.dim == 2 ? f.order : 1;
  const double l0 = f.box[0].length(), l1 = f.box[1].length();
  Point out{0.0, 0.0};
  for (int c = 0; c < f.dim; ++c) {
    double s = 0.0;
    for (int k = 0; k < m2; ++k)
      for (int j = 0; j < f.order; ++j) {
        s += f.coeff(c, j, k) * t.ddb[0][j] * t.b[1][k] / (l0 * l0);
        if (f.dim == 2) s += f.coeff(c, j, k) * t.b[0][j] * t.ddb[1][k] / (l1 * l1);
      }
    out[c] = f.box[c].length() * s;
  }
  return out;
}

// RegistrationKernel ---------------------------------------------------------

RegistrationKernel::RegistrationKernel(const Grid& grid, int order)
    : grid_(grid), order_(order), m2_(grid.dim() == 2 ? order : 1) {
  if (order < 1) throw ConfigError("registration order must be >= 1");
  auto table = [&](int axis, Eigen::MatrixXd& b, Eigen::MatrixXd& bd, Eigen::MatrixXd& bdd) {
    const int n = grid.cells(axis);
    b.resize(n, order);
    bd.resize(n, order);
    bdd.resize(n, order);
    std::vector<double> v(order), d1(order), d2(order);
    for (int i = 0; i < n; ++i) {
      const double xi = (grid.center_coord(axis, i) - grid.bounds(axis).lo) / grid.bounds(axis).length();
      bump_basis(order, xi, v, d1, d2);
      for (int j = 0; j < order; ++j) {
        b(i, j) = v[j];
        bd(i, j) = d1[j];
        bdd(i, j) = d2[j];
      }
    }
  };
  table(0, b1_, b1d_, b1dd_);
  if (grid.dim() == 2) {
    table(1, b2_, b2d_, b2dd_);
  } else {
    b2_ = Eigen::MatrixXd::Ones(1, 1);
    b2d_ = Eigen::MatrixXd::Zero(1, 1);
    b2dd_ = Eigen::MatrixXd::Zero(1, 1);
  }
}

std::size_t RegistrationKernel::num_coeffs() const {
  return static_cast<std::size_t>(grid_.dim()) * order_ * m2_;
}

Eigen::MatrixXd RegistrationKernel::displacement(std::span<const double> coeffs, int c) const {
  const Eigen::Map<const Eigen::MatrixXd> A(coeffs.data() + c * order_ * m2_, order_, m2_);
  return grid_.bounds(c).length() * (b1_ * A * b2_.transpose());
}

double RegistrationKernel::min_forward_det(std::span<const double> coeffs) const {
  const double l1 = grid_.bounds(0).length();
  const double l2 = grid_.bounds(1).length();
  auto block = [&](int c) {
    return Eigen::Map<const Eigen::MatrixXd>(coeffs.data() + c * order_ * m2_, order_, m2_);
  };
  if (grid_.dim() == 1) {
    const Eigen::MatrixXd d = b1d_ * block(0) * b2_.transpose();
    return 1.0 - d.maxCoeff();
  }
  // d Psi_c / d x_a = (l_c / l_a) B_a' A_c B_b^T
  const Eigen::MatrixXd j11 = b1d_ * block(0) * b2_.transpose();
  const Eigen::MatrixXd j12 = (l1 / l2) * (b1_ * block(0) * b2d_.transpose());
  const Eigen::MatrixXd j21 = (l2 / l1) * (b1d_ * block(1) * b2_.transpose());
  const Eigen::MatrixXd j22 = b1_ * block(1) * b2d_.transpose();
  const Eigen::ArrayXXd det =
      (1.0 - j11.array()) * (1.0 - j22.array()) - j12.array() * j21.array();
  return det.minCoeff();
}

ObjectiveValue RegistrationKernel::evaluate(std::span<const double> coeffs, const CellField& u_t,
                                            const CellField& u_ref, double eps,
                                            std::span<double> grad,
                                            const FoldPenalty& fold) const {
  if (!(u_t.grid == grid_) || !(u_ref.grid == grid_) || u_t.components != u_ref.components)
    throw ConfigError("registration objective: mismatched grids");
  if (coeffs.size() != num_coeffs()) throw ConfigError("registration objective: wrong coefficient count");
  const int d = grid_.dim();
  const int n1 = grid_.cells(0);
  const int n2 = d == 2 ? grid_.cells(1) : 1;
  const std::size_t N = grid_.num_cells();
  const double vol = grid_.cell_volume();
  const double l1 = grid_.bounds(0).length();
  const double l2 = grid_.bounds(1).length();
  const bool want_grad = !grad.empty();

  std::array<Eigen::MatrixXd, 2> psi, lap, resid;
  for (int c = 0; c < d; ++c) {
    const Eigen::Map<const Eigen::MatrixXd> A(coeffs.data() + c * order_ * m2_, order_, m2_);
    const double lc = grid_.bounds(c).length();
    psi[c] = lc * (b1_ * A * b2_.transpose());
    lap[c] = b1dd_ * A * b2_.transpose() / (l1 * l1);
    if (d == 2) lap[c] += b1_ * A * b2dd_.transpose() / (l2 * l2);
    lap[c] *= lc;
    if (want_grad) resid[c].setZero(n1, n2);
  }

  const int nc = u_t.components;
  double matching = 0.0;
#pragma omp parallel for reduction(+ : matching) schedule(static)
  for (std::size_t cell = 0; cell < N; ++cell) {
    const int i = static_cast<int>(cell % n1);
    const int k = static_cast<int>(cell / n1);
    const Point x = grid_.cell_center(cell);
    Point y{x[0] - psi[0](i, k), d == 2 ? x[1] - psi[1](i, k) : 0.0};
    y = grid_.clamp(y);
    const InterpStencil st = cell_stencil(grid_, y);
    std::array<double, 2> dr{0.0, 0.0};
    for (int comp = 0; comp < nc; ++comp) {
      const auto ut = u_t.component(comp);
      double g = 0.0, gx = 0.0, gy = 0.0;
      for (int s = 0; s < st.count; ++s) {
        const double v = ut[st.cell[s]];
        g += st.weight[s] * v;
        gx += st.dweight[0][s] * v;
        gy += st.dweight[1][s] * v;
      }
      const double r = g - u_ref.at(comp, cell);
      matching += vol * r * r;
      dr[0] += r * gx;
      dr[1] += r * gy;
    }
    if (want_grad)
      for (int c = 0; c < d; ++c) resid[c](i, k) = -2.0 * vol * grid_.bounds(c).length() * dr[c];
  }

  double reg = 0.0;
  for (int c = 0; c < d; ++c) reg += lap[c].squaredNorm();
  reg *= eps * vol;

  if (want_grad) {
    for (int c = 0; c < d; ++c) {
      const double lc = grid_.bounds(c).length();
      Eigen::MatrixXd g = b1_.transpose() * resid[c] * b2_;
      Eigen::MatrixXd lg = b1dd_.transpose() * lap[c] * b2_ / (l1 * l1);
      if (d == 2) lg += b1_.transpose() * lap[c] * b2dd_ / (l2 * l2);
      g += 2.0 * eps * vol * lc * lg;
      Eigen::Map<Eigen::MatrixXd>(grad.data() + c * order_ * m2_, order_, m2_) = g;
    }
  }

  double penalty = 0.0;
  if (fold.weight > 0.0) {
    auto block = [&](int c) {
      return Eigen::Map<const Eigen::MatrixXd>(coeffs.data() + c * order_ * m2_, order_, m2_);
    };
    if (d == 1) {
      const Eigen::ArrayXXd det = 1.0 - (b1d_ * block(0) * b2_.transpose()).array();
      const Eigen::ArrayXXd gap = (fold.floor - det).max(0.0);
      penalty = fold.weight * vol * gap.square().sum();
      if (want_grad) {
        // d det / d A = -B1'^T
        const Eigen::MatrixXd r = (2.0 * fold.weight * vol * gap).matrix();
        Eigen::Map<Eigen::MatrixXd>(grad.data(), order_, m2_) += b1d_.transpose() * r * b2_;
      }
    } else {
      const Eigen::ArrayXXd j11 = (b1d_ * block(0) * b2_.transpose()).array();
      const Eigen::ArrayXXd j12 = (l1 / l2) * (b1_ * block(0) * b2d_.transpose()).array();
      const Eigen::ArrayXXd j21 = (l2 / l1) * (b1d_ * block(1) * b2_.transpose()).array();
      const Eigen::ArrayXXd j22 = (b1_ * block(1) * b2d_.transpose()).array();
      const Eigen::ArrayXXd det = (1.0 - j11) * (1.0 - j22) - j12 * j21;
      const Eigen::ArrayXXd gap = (fold.floor - det).max(0.0);
      penalty = fold.weight * vol * gap.square().sum();
      if (want_grad) {
        // dP/d det = -2 w vol gap; chain through the four Jacobian entries
        const Eigen::ArrayXXd r = -2.0 * fold.weight * vol * gap;
        const Eigen::MatrixXd r11 = (r * -(1.0 - j22)).matrix();
        const Eigen::MatrixXd r12 = (r * -j21).matrix();
        const Eigen::MatrixXd r21 = (r * -j12).matrix();
        const Eigen::MatrixXd r22 = (r * -(1.0 - j11)).matrix();
        Eigen::Map<Eigen::MatrixXd>(grad.data(), order_, m2_) +=
            b1d_.transpose() * r11 * b2_ + (l1 / l2) * (b1_.transpose() * r12 * b2d_);
        Eigen::Map<Eigen::MatrixXd>(grad.data() + order_ * m2_, order_, m2_) +=
            (l2 / l1) * (b1d_.transpose() * r21 * b2_) + b1_.transpose() * r22 * b2d_;
      }
    }
  }
  return {matching, reg, matching + reg + penalty, penalty};
}

ObjectiveValue objective(const DisplacementField& field, const CellField& u_t,
                         const CellField& u_ref, double eps) {
  if (field.dim != u_t.grid.dim()) throw ConfigError("objective: field/grid dimension mismatch");
  const RegistrationKernel kernel(u_t.grid, field.order);
  return kernel.evaluate(field.coeffs, u_t, u_ref, eps, {});
}

// BFGS -------------------------------------------------------------------------

RegistrationResult register_snapshot(const RegistrationKernel& kernel, const CellField& u_t,
                                     const CellField& u_ref, double eps,
                                     const DisplacementField& init,
                                     const RegistrationOptions& opts) {
  if (init.order != kernel.order() || init.dim != kernel.grid().dim())
    throw ConfigError("register_snapshot: initial field has the wrong order");
  const std::size_t n = kernel.num_coeffs();
  using Vec = Eigen::VectorXd;

  const Vec x0 = Eigen::Map<const Vec>(init.coeffs.data(), n);
  Vec x = x0;
  Vec g(n), g_new(n), x_new(n);
  const double mu = opts.proximal_weight;
  auto eval = [&](const Vec& at, Vec& grad) {
    ObjectiveValue v = kernel.evaluate({at.data(), n}, u_t, u_ref, eps, {grad.data(), n}, opts.fold);
    if (mu > 0.0) {
      const double prox = mu * (at - x0).squaredNorm();
      grad += 2.0 * mu * (at - x0);
      v.penalty += prox;
      v.total += prox;
    }
    return v;
  };

  RegistrationResult res;
  res.field = init;
  ObjectiveValue fx = eval(x, g);
  res.initial = fx;


  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;
  int it = 0;
  int stalls = 0;
  bool converged = false;
  for (; it < opts.max_iterations; ++it) {
    if (g.lpNorm<Eigen::Infinity>() <= opts.gradient_tolerance) {
      converged = true;
      break;
    }
    Vec p = -H * g;
    double slope = g.dot(p);
    if (!(slope < 0.0)) {
      H.setIdentity();
      p = -g;
      slope = -g.squaredNorm();
    }
    // Armijo backtracking
    double step = 1.0;
    ObjectiveValue f_new{};
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = x + step * p;
      f_new = eval(x_new, g_new);
      if (std::isfinite(f_new.total) && f_new.total <= fx.total + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (H.isIdentity()) {
        converged = it > 0;
        break;
      }
      H.setIdentity();
      continue;
    }
    const Vec s = x_new - x;
    const Vec y = g_new - g;
    const double sy = s.dot(y);
    const double decrease = fx.total - f_new.total;
    x = x_new;
    g = g_new;
    fx = f_new;
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        H *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    if (decrease <= 1e-12 * std::max(std::abs(fx.total), 1e-300)) {
      if (++stalls >= 3) {
        converged = true;
        ++it;
        break;
      }
    } else {
      stalls = 0;
    }
    if (s.lpNorm<Eigen::Infinity>() < 1e-14) {
      converged = true;
      ++it;
      break;
    }
  }

  res.field.coeffs.assign(x.data(), x.data() + n);
  // report the objective without the proximal anchor
  res.final = mu > 0.0 ? kernel.evaluate({x.data(), n}, u_t, u_ref, eps, {}, opts.fold) : fx;
  res.iterations = it;
  res.warning = !converged && g.lpNorm<Eigen::Infinity>() > opts.gradient_tolerance;
  return res;
}

RegistrationResult register_snapshot(const CellField& u_t, const CellField& u_ref, int order,
                                     double eps, const DisplacementField& init,
                                     const RegistrationOptions& opts) {
  const RegistrationKernel kernel(u_t.grid, order);
  return register_snapshot(kernel, u_t, u_ref, eps, init, opts);
}

// Trajectories -------------------------------------------------------------

std::size_t TransformSet::warning_count() const {
  return static_cast<std::size_t>(std::count(warnings.begin(), warnings.end(), 1));
}

std::size_t closest_index(std::span<const double> times, double t) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < times.size(); ++k)
    if (std::abs(times[k] - t) < std::abs(times[best] - t)) best = k;
  return best;
}

TransformSet register_trajectory(const SnapshotSet& snaps, double t_ref, int order, double eps,
                                 const RegistrationOptions& opts) {
  const std::size_t K = snaps.fields.size();
  if (K == 0) throw ConfigError("register_trajectory: empty snapshot set");
  if (t_ref < snaps.times.front() - 1e-12 || t_ref > snaps.times.back() + 1e-12)
    throw ConfigError("register_trajectory: t_ref outside the snapshot window");
  if (eps < 0.0) throw ConfigError("register_trajectory: negative regularization weight");

  TransformSet ts;
  ts.t_ref = t_ref;
  ts.order = order;
  ts.eps = eps;
  ts.times = snaps.times;
  ts.ref_index = closest_index(snaps.times, t_ref);
  ts.fields.assign(K, DisplacementField::zero(snaps.grid, order));
  ts.objectives.assign(K, {});
  ts.iterations.assign(K, 0);
  ts.warnings.assign(K, 0);

  const RegistrationKernel kernel(snaps.grid, order);
  const CellField& ref = snaps.fields[ts.ref_index];
  auto store = [&](std::size_t k, const RegistrationResult& r) {
    ts.fields[k] = r.field;
    ts.objectives[k] = r.final;
    ts.iterations[k] = r.iterations;
    ts.warnings[k] = r.warning ? 1 : 0;
  };

  if (opts.independent) {
    const DisplacementField zero = DisplacementField::zero(snaps.grid, order);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < K; ++k)
      store(k, register_snapshot(kernel, snaps.fields[k], ref, eps, zero, opts));
    return ts;
  }

  std::vector<std::size_t> sweep(K);
  std::iota(sweep.begin(), sweep.end(), std::size_t{0});
  std::stable_sort(sweep.begin(), sweep.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(snaps.times[a] - snaps.times[ts.ref_index]) <
           std::abs(snaps.times[b] - snaps.times[ts.ref_index]);
  });
  // Sweep each side of the reference outward, warm-starting every solve from
  // the field just computed on that side.
  auto run_side = [&](std::ptrdiff_t step) {
    std::size_t prev = ts.ref_index;
    for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(ts.ref_index) + step;
         k >= 0 && k < static_cast<std::ptrdiff_t>(K); k += step) {
      store(static_cast<std::size_t>(k),
            register_snapshot(kernel, snaps.fields[k], ref, eps, ts.fields[prev], opts));
      prev = static_cast<std::size_t>(k);
    }
  };
  store(ts.ref_index, register_snapshot(kernel, ref, ref, eps, DisplacementField::zero(snaps.grid, order), opts));
  run_side(+1);
  run_side(-1);
  return ts;
}

int select_order(const SnapshotSet& snaps, double t_ref, int max_order, double eps,
                 const RegistrationOptions& opts) {
  if (max_order < 2) return std::max(max_order, 1);
  double previous = std::numeric_limits<double>::infinity();
  for (int m = 2; m <= max_order; ++m) {
    const TransformSet ts = register_trajectory(snaps, t_ref, m, eps, opts);
    double total = 0.0;
    for (const ObjectiveValue& o : ts.objectives) total += o.matching;
    if (m > 2 && !(total < 0.9 * previous)) return m - 1;
    previous = total;
  }
  return max_order;
}

}  // namespace tsdmd
