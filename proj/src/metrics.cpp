// SPDX-License-Identifier: Apache-2.0
#include "tsdmd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "tsdmd/errors.hpp"
#include "tsdmd/pipeline.hpp"

namespace tsdmd {

double l1_norm(const CellField& f, int c) {
  double s = 0.0;
  for (double v : f.component(c)) s += std::abs(v);
  return s * f.grid.cell_volume();
}

double l1_distance(const CellField& a, const CellField& b, int c) {
  if (!(a.grid == b.grid) || a.components != b.components) throw ConfigError("l1_distance: grid mismatch");
  const auto x = a.component(c), y = b.component(c);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
  return s * a.grid.cell_volume();
}

std::vector<double> rel_l1_error(const CellField& ref, const CellField& approx) {
  std::vector<double> e(ref.components);
  for (int c = 0; c < ref.components; ++c) {
    const double denom = l1_norm(ref, c);
    if (!(denom > 0.0)) throw ConfigError("rel_l1_error: reference has zero L1 norm");
    e[c] = l1_distance(ref, approx, c) / denom;
  }
  return e;
}

std::vector<double> sample_times(double t0, double t1, int count, std::uint64_t seed) {
  if (count < 1) throw ConfigError("sample_times: count must be >= 1");
  if (t1 < t0) throw ConfigError("sample_times: empty window");
  std::mt19937_64 rng(seed);
  std::vector<double> t(count);
  for (double& s : t) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    s = t0 + (t1 - t0) * u;
  }
  return t;
}

ErrorReport avg_error(const FieldEval& rom, const FieldBatchEval& hf, double t0, double t1, int count,
                      std::uint64_t seed, const std::string& method, int n) {
  ErrorReport rep;
  rep.method = method;
  rep.n = n;
  rep.t0 = t0;
  rep.t1 = t1;
  rep.seed = seed;
  rep.times = sample_times(t0, t1, count, seed);

  std::vector<std::size_t> order(rep.times.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rep.times[a] < rep.times[b]; });
  std::vector<double> sorted(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = rep.times[order[k]];
  const std::vector<CellField> ref = hf(sorted);
  if (ref.size() != sorted.size()) throw ConfigError("avg_error: HF evaluator returned the wrong count");

  rep.errors.assign(rep.times.size(), {});
  for (std::size_t k = 0; k < order.size(); ++k)
    rep.errors[order[k]] = rel_l1_error(ref[k], rom(sorted[k]));
  const int nc = ref.front().components;
  rep.average.assign(nc, 0.0);
  for (const auto& e : rep.errors)
    for (int c = 0; c < nc; ++c) rep.average[c] += e[c];
  for (double& a : rep.average) a /= static_cast<double>(rep.errors.size());
  return rep;
}

std::vector<double> sv_decay(const SnapshotMatrix& S, int n_max) {
  const int lim = static_cast<int>(std::min(S.rows(), S.cols()));
  if (n_max < 1 || n_max > lim) throw ConfigError("sv_decay: n_max out of range");
  const SVDTriple svd = truncated_svd(S.data, n_max);
  std::vector<double> out(n_max);
  for (int k = 0; k < n_max; ++k) out[k] = svd.sigma(0) > 0.0 ? svd.sigma(k) / svd.sigma(0) : 0.0;
  return out;
}

TimingReport speedup(std::span<const double> tau_hf, std::span<const double> tau_rom) {
  if (tau_hf.size() != tau_rom.size() || tau_hf.empty()) throw ConfigError("speedup: sample sets differ");
  TimingReport r;
  r.tau_hf.assign(tau_hf.begin(), tau_hf.end());
  r.tau_rom.assign(tau_rom.begin(), tau_rom.end());
  for (std::size_t k = 0; k < tau_hf.size(); ++k)
    if (!(tau_hf[k] > 0.0) || !(tau_rom[k] > 0.0)) throw ConfigError("speedup: non-positive timing");
  r.kappa = std::accumulate(tau_hf.begin(), tau_hf.end(), 0.0) /
            std::accumulate(tau_rom.begin(), tau_rom.end(), 0.0);
  return r;
}

double bv_seminorm(const CellField& f, int c) {
  const Grid& g = f.grid;
  const auto u = f.component(c);
  double tv = 0.0;
  if (g.dim() == 1) {
    for (int i = 0; i + 1 < g.cells(0); ++i) tv += std::abs(u[i + 1] - u[i]);
    return tv;
  }
  const int nx = g.cells(0), ny = g.cells(1);
  double sx = 0.0, sy = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) sx += std::abs(u[g.cell_index(i + 1, j)] - u[g.cell_index(i, j)]);
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i) sy += std::abs(u[g.cell_index(i, j + 1)] - u[g.cell_index(i, j)]);
  return sx * g.h(1) + sy * g.h(0);
}

namespace {

double max_abs_diff(const VertexField& a, const VertexField& b) {
  double m = 0.0;
  for (std::size_t v = 0; v < a.values.size(); ++v) m = std::max(m, std::abs(a.values[v] - b.values[v]));
  return m;
}

double max_grad(const VertexField& a) {
  double m = 0.0;
  for (int i = 0; i < a.grid.cells(0); ++i) m = std::max(m, std::abs(a.at(0, i + 1) - a.at(0, i)) / a.grid.h(0));
  return m;
}

double max_grad_diff(const VertexField& a, const VertexField& b) {
  double m = 0.0;
  for (int i = 0; i < a.grid.cells(0); ++i) {
    const double ga = (a.at(0, i + 1) - a.at(0, i)) / a.grid.h(0);
    const double gb = (b.at(0, i + 1) - b.at(0, i)) / b.grid.h(0);
    m = std::max(m, std::abs(ga - gb));
  }
  return m;
}

double l1_all(const CellField& a, const CellField& b) {
  double s = 0.0;
  for (int c = 0; c < a.components; ++c) s += l1_distance(a, b, c);
  return s;
}

}  // namespace

ErrorBoundReport check_error_bound(std::span<const CellField> u_N, std::span<const CellField> g_N,
                                   std::span<const CellField> g_n,
                                   std::span<const VertexField> phi, std::span<const VertexField> phi_n,
                                   double slack) {
  const std::size_t K = u_N.size();
  if (K == 0 || g_N.size() != K || g_n.size() != K || phi.size() != K || phi_n.size() != K)
    throw ConfigError("check_error_bound: inconsistent input lengths");
  if (u_N[0].grid.dim() != 1) throw ConfigError("check_error_bound: only 1D inputs are supported");

  ErrorBoundReport r;
  for (std::size_t k = 0; k < K; ++k) {
    r.delta_g = std::max(r.delta_g, l1_all(g_N[k], g_n[k]));
    r.delta_phi = std::max(r.delta_phi, max_abs_diff(phi[k], phi_n[k]) + max_grad_diff(phi[k], phi_n[k]));
    double bv = 0.0;
    for (int c = 0; c < u_N[k].components; ++c) bv += bv_seminorm(u_N[k], c);
    r.bv_sup = std::max(r.bv_sup, bv);
    r.grad_phi_sup = std::max(r.grad_phi_sup, max_grad(phi[k]));

    const CellField u_n = compose(g_n[k], phi_n[k]);
    const CellField gN_phi = compose(g_N[k], phi[k]);
    const CellField gN_phin = compose(g_N[k], phi_n[k]);
    r.lhs = std::max(r.lhs, l1_all(gN_phi, u_n));
    r.lhs_raw = std::max(r.lhs_raw, l1_all(u_N[k], u_n));
    r.a1 = std::max(r.a1, l1_all(gN_phi, gN_phin));
    r.a2 = std::max(r.a2, l1_all(gN_phin, u_n));
    r.decomposition_floor = std::max(r.decomposition_floor, l1_all(u_N[k], gN_phi));
  }
  r.delta = std::max(r.delta_g, r.delta_phi);
  r.c1 = r.bv_sup + r.grad_phi_sup;
  r.bound = r.c1 * r.delta + r.delta * r.delta;
  r.bound_with_volume = r.c1 * u_N[0].grid.domain_volume() * r.delta + r.delta * r.delta;
  r.ratio = r.bound > 0.0 ? r.lhs / r.bound : (r.lhs == 0.0 ? 0.0 : INFINITY);
  r.holds = r.lhs <= (1.0 + slack) * r.bound || r.lhs == 0.0;
  r.holds_raw = r.lhs_raw <= (1.0 + slack) * r.bound || r.lhs_raw == 0.0;
  return r;
}

}  // namespace tsdmd
