// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tsdmd/dmd.hpp"
#include "tsdmd/mesh.hpp"

namespace tsdmd {

double l1_norm(const CellField& f, int component);
double l1_distance(const CellField& a, const CellField& b, int component);

/// Relative L1 error per component; throws ConfigError on a zero-norm reference.
std::vector<double> rel_l1_error(const CellField& ref, const CellField& approx);

/// count uniform samples on [t0, t1] from a seeded mt19937_64 (53-bit mantissa
/// mapping, bit-reproducible across platforms).
std::vector<double> sample_times(double t0, double t1, int count, std::uint64_t seed);

using FieldEval = std::function<CellField(double)>;
using FieldBatchEval = std::function<std::vector<CellField>(std::span<const double>)>;

struct ErrorReport {
  std::string method;  // "tsdmd" | "dmd"
  int n = 0;
  double t0 = 0.0;
  double t1 = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> errors;  // [sample][component]
  std::vector<double> average;              // per component
};

/// Mean relative L1 error over count seeded uniform samples in [t0, t1].
/// The HF reference is evaluated at the (sorted) sample times in one batch.
ErrorReport avg_error(const FieldEval& rom, const FieldBatchEval& hf, double t0, double t1, int count,
                      std::uint64_t seed, const std::string& method = "", int n = 0);

/// sigma_k / sigma_1 for k = 1..n_max.
std::vector<double> sv_decay(const SnapshotMatrix& S, int n_max);

struct TimingReport {
  std::vector<double> tau_hf;
  std::vector<double> tau_rom;
  double kappa = 0.0;
};

TimingReport speedup(std::span<const double> tau_hf, std::span<const double> tau_rom);

/// 1D: sum |u_{i+1} - u_i|; 2D: axis jumps weighted by the transverse cell width.
double bv_seminorm(const CellField& f, int component = 0);

struct ErrorBoundReport {
  double delta = 0.0;
  double delta_g = 0.0;    // max_t ||g_N - g_n||_L1
  double delta_phi = 0.0;  // max_t ||phi~ - phi~_n||_W1inf
  double c1 = 0.0;
  double bv_sup = 0.0;
  double grad_phi_sup = 0.0;
  double lhs = 0.0;      // max_t ||g_N(phi~) - u_n||_L1 (decomposed HF solution)
  double lhs_raw = 0.0;  // max_t ||u_N - u_n||_L1 with the stored HF snapshot
  double bound = 0.0;
  double bound_with_volume = 0.0;
  double ratio = 0.0;
  double a1 = 0.0;  // max_t ||g_N(phi~) - g_N(phi~_n)||_L1
  double a2 = 0.0;  // max_t ||g_N(phi~_n) - g_n(phi~_n)||_L1
  double decomposition_floor = 0.0;  // max_t ||u_N - g_N(phi~)||_L1
  bool holds = false;
  bool holds_raw = false;
};

/// Discrete check of ||u_N - u_n|| <= C1 delta + delta^2 on training times (1D).
ErrorBoundReport check_error_bound(std::span<const CellField> u_N, std::span<const CellField> g_N,
                                   std::span<const CellField> g_n,
                                   std::span<const VertexField> phi_tilde,
                                   std::span<const VertexField> phi_tilde_n, double slack = 0.10);

}  // namespace tsdmd
