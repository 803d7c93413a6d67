// SPDX-License-Identifier: Apache-2.0
#include "tsdmd/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "tsdmd/errors.hpp"
#include "tsdmd/io.hpp"
#include "tsdmd/metrics.hpp"
#include "tsdmd/registration.hpp"
#include "tsdmd/transform.hpp"

namespace tsdmd {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> r(hi - lo + 1);
  std::iota(r.begin(), r.end(), lo);
  return r;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// CSV with the resolved config as a leading comment line.
class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const json& config, const std::string& header) : os_(path) {
    if (!os_) throw ConfigError("cannot open '" + path.string() + "' for writing");
    os_ << "# config: " << config.dump() << '\n' << header << '\n';
  }
  template <typename... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << '\n';
  }

 private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
  std::ofstream os_;
};

std::vector<double> sorted_samples(double t0, double t1, int count, std::uint64_t seed) {
  std::vector<double> t = sample_times(t0, t1, count, seed);
  std::sort(t.begin(), t.end());
  return t;
}

std::vector<VertexField> vertex_columns(const io::SnapshotFile& f) {
  std::vector<VertexField> out;
  for (Eigen::Index k = 0; k < f.matrix.data.cols(); ++k)
    out.push_back(unflatten_vertices(f.grid, {f.matrix.data.col(k).data(), f.matrix.rows()}));
  return out;
}

std::vector<CellField> cell_columns(const io::SnapshotFile& f) {
  std::vector<CellField> out;
  for (Eigen::Index k = 0; k < f.matrix.data.cols(); ++k)
    out.push_back(unflatten_cells(f.grid, f.components, {f.matrix.data.col(k).data(), f.matrix.rows()}));
  return out;
}

void require_file(const fs::path& p, const std::string& stage) {
  if (!fs::exists(p)) throw ConfigError("missing input '" + p.string() + "' (run " + stage + " first)");
}

template <typename T>
T get_or(const json& j, const char* key, const T& fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"test1", "test2", "test3", "test3-window08", "test3-tref1"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "test1") {
    c.output_dir = "out/test1";
    c.ranks = range(1, 13);
    c.bound_ranks = range(5, 13);
    return c;
  }
  if (name == "test2") {
    c.problem = ProblemKind::wave1d;
    c.cells = {4000};
    c.K = 500;
    c.final_time = 0.6;
    c.order = 5;
    c.ranks = range(1, 13);
    c.interp_window = {0.0, 0.6};
    c.extrap_window = {0.6, 0.7};
    c.speedup_rank = 10;
    c.output_dir = "out/test2";
    return c;
  }
  if (name == "test3" || name == "test3-window08" || name == "test3-tref1") {
    c.problem = ProblemKind::burgers2d;
    c.cells = {300, 300};
    c.K = 50;
    c.final_time = 1.0;
    c.order = 6;
    c.ranks = range(1, 8);
    c.interp_window = {0.0, 1.0};
    c.extrap_window = {1.0, 1.1};
    c.speedup_rank = 5;
    c.output_dir = "out/" + name;
    if (name == "test3-window08") c.final_time = 0.8;
    if (name == "test3-tref1") c.t_ref = 1.0;
    return c;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

json config_to_json(const ExperimentConfig& c) {
  json j = {{"name", c.name},
            {"problem", to_string(c.problem)},
            {"cells", c.cells},
            {"K", c.K},
            {"final_time", c.final_time},
            {"order", c.order},
            {"eps", c.eps},
            {"t_ref", c.resolved_t_ref()},
            {"ranks", c.ranks},
            {"interp_window", c.interp_window},
            {"extrap_window", c.extrap_window},
            {"samples", c.samples},
            {"seed", c.seed},
            {"output_dir", c.output_dir},
            {"phi_offset", to_string(c.phi_offset)},
            {"proximal_weight", c.proximal_weight},
            {"fold_floor", c.fold_floor},
            {"fold_weight", c.fold_weight},
            {"max_iterations", c.max_iterations},
            {"independent_registration", c.independent_registration},
            {"speedup_rank", c.speedup_rank},
            {"jacobian_ranks", c.jacobian_ranks},
            {"jacobian_samples", c.jacobian_samples},
            {"bound_ranks", c.bound_ranks},
            {"save_models", c.save_models}};
  if (c.problem == ProblemKind::wave1d) j["wave_orientation"] = to_string(c.wave_orientation);
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "preset", "name", "problem", "wave_orientation", "cells", "K", "final_time", "order", "eps",
      "t_ref", "ranks", "interp_window", "extrap_window", "samples", "seed", "output_dir",
      "phi_offset", "proximal_weight", "fold_floor", "fold_weight", "max_iterations",
      "independent_registration", "speedup_rank", "jacobian_ranks", "jacobian_samples",
      "bound_ranks", "save_models"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");

  ExperimentConfig c;
  try {
    c = preset(get_or<std::string>(j, "preset", "test1"));
    c.name = get_or(j, "name", c.name);
    if (j.contains("problem")) c.problem = problem_kind_from_string(j["problem"].get<std::string>());
    if (j.contains("wave_orientation"))
      c.wave_orientation = wave_orientation_from_string(j["wave_orientation"].get<std::string>());
    c.cells = get_or(j, "cells", c.cells);
    c.K = get_or(j, "K", c.K);
    c.final_time = get_or(j, "final_time", c.final_time);
    c.order = get_or(j, "order", c.order);
    c.eps = get_or(j, "eps", c.eps);
    if (j.contains("t_ref") && !j["t_ref"].is_null()) c.t_ref = j["t_ref"].get<double>();
    c.ranks = get_or(j, "ranks", c.ranks);
    c.interp_window = get_or(j, "interp_window", c.interp_window);
    c.extrap_window = get_or(j, "extrap_window", c.extrap_window);
    c.samples = get_or(j, "samples", c.samples);
    c.seed = get_or(j, "seed", c.seed);
    c.output_dir = get_or(j, "output_dir", c.output_dir);
    if (j.contains("phi_offset")) c.phi_offset = phi_offset_from_string(j["phi_offset"].get<std::string>());
    c.proximal_weight = get_or(j, "proximal_weight", c.proximal_weight);
    c.fold_floor = get_or(j, "fold_floor", c.fold_floor);
    c.fold_weight = get_or(j, "fold_weight", c.fold_weight);
    c.max_iterations = get_or(j, "max_iterations", c.max_iterations);
    c.independent_registration = get_or(j, "independent_registration", c.independent_registration);
    c.speedup_rank = get_or(j, "speedup_rank", c.speedup_rank);
    c.jacobian_ranks = get_or(j, "jacobian_ranks", c.jacobian_ranks);
    c.jacobian_samples = get_or(j, "jacobian_samples", c.jacobian_samples);
    c.bound_ranks = get_or(j, "bound_ranks", c.bound_ranks);
    c.save_models = get_or(j, "save_models", c.save_models);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  }
  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  const int dim = dimension_of(c.problem);
  if (static_cast<int>(c.cells.size()) != dim) throw ConfigError("cells must list one count per axis");
  for (int n : c.cells)
    if (n < 2) throw ConfigError("cells must be >= 2 per axis");
  if (c.K < 2) throw ConfigError("K must be >= 2");
  if (!(c.final_time > 0.0)) throw ConfigError("final_time must be positive");
  if (c.order < 1) throw ConfigError("order must be >= 1");
  if (c.eps < 0.0) throw ConfigError("eps must be >= 0");
  const double tr = c.resolved_t_ref();
  if (tr < 0.0 || tr > c.final_time) throw ConfigError("t_ref must lie in [0, final_time]");
  auto check_ranks = [&](const std::vector<int>& r, const char* what) {
    for (int n : r)
      if (n < 1 || n > c.K - 1) throw ConfigError(std::string(what) + " entries must lie in [1, K-1]");
  };
  if (c.ranks.empty()) throw ConfigError("ranks must not be empty");
  check_ranks(c.ranks, "ranks");
  check_ranks(c.jacobian_ranks, "jacobian_ranks");
  check_ranks(c.bound_ranks, "bound_ranks");
  check_ranks({c.speedup_rank}, "speedup_rank");
  if (!c.bound_ranks.empty() && dim != 1) throw ConfigError("bound_ranks requires a 1D problem");
  for (const auto& w : {c.interp_window, c.extrap_window})
    if (!(w[0] < w[1]) || w[0] < 0.0) throw ConfigError("windows must satisfy 0 <= t0 < t1");
  if (c.samples < 1 || c.jacobian_samples < 1) throw ConfigError("sample counts must be >= 1");
  if (c.proximal_weight < 0.0 || c.fold_weight < 0.0) throw ConfigError("penalty weights must be >= 0");
  if (c.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

ProblemSpec problem_of(const ExperimentConfig& c) {
  ProblemSpec p;
  switch (c.problem) {
    case ProblemKind::advection1d: p = advection_problem(); break;
    case ProblemKind::wave1d: p = wave_problem(c.wave_orientation); break;
    case ProblemKind::burgers2d: p = burgers_problem(); break;
  }
  p.final_time = c.final_time;
  return p;
}

Grid grid_of(const ExperimentConfig& c) {
  const ProblemSpec p = problem_of(c);
  if (p.dim() == 1) return build_grid_1d(p.domain[0], c.cells[0]);
  return build_grid_2d(p.domain[0], p.domain[1], c.cells[0], c.cells[1]);
}

json run_hf_solve(const ExperimentConfig& cfg) {
  validate(cfg);
  const StageFiles files{cfg.output_dir};
  fs::create_directories(files.dir);
  const json cj = config_to_json(cfg);

  const auto start = Clock::now();
  const SnapshotSet snaps = solve(problem_of(cfg), grid_of(cfg), cfg.K);
  const double elapsed = seconds_since(start);

  io::write_snapshot_file(files.snapshots(), io::from_snapshot_set(snaps, {{"config", cj}}));
  json summary = {{"config", cj},
                  {"stage", "hf-solve"},
                  {"snapshots", files.snapshots().filename().string()},
                  {"rows", snaps.fields.front().values.size()},
                  {"cols", snaps.fields.size()},
                  {"steps", snaps.steps},
                  {"seconds", elapsed},
                  {"wall_clock", snaps.wall_clock},
                  {"clock", "steady_clock"}};
  io::write_json(files.hf_timing(), summary);
  return summary;
}

json run_register(const ExperimentConfig& cfg) {
  validate(cfg);
  const StageFiles files{cfg.output_dir};
  require_file(files.snapshots(), "hf-solve");
  const json cj = config_to_json(cfg);
  const io::SnapshotFile sf = io::read_snapshot_file(files.snapshots());
  const SnapshotSet snaps = io::to_snapshot_set(sf);

  RegistrationOptions ro;
  ro.max_iterations = cfg.max_iterations;
  ro.independent = cfg.independent_registration;
  ro.fold = {cfg.fold_floor, cfg.fold_weight};
  ro.proximal_weight = cfg.proximal_weight;

  auto start = Clock::now();
  const TransformSet ts = register_trajectory(snaps, cfg.resolved_t_ref(), cfg.order, cfg.eps, ro);
  const double t_register = seconds_since(start);
  start = Clock::now();
  const TransformedSnapshotSet tr = transform_snapshots(snaps, ts);
  const double t_transform = seconds_since(start);

  json tj = io::transform_set_to_json(ts);
  tj["config"] = cj;
  io::write_json(files.transforms(), tj);

  const double t0 = snaps.times.front();
  io::SnapshotFile g;
  g.grid = snaps.grid;
  g.components = sf.components;
  g.times = snaps.times;
  g.matrix = cell_snapshot_matrix(tr.g, t0, snaps.dt());
  g.meta = {{"quantity", "g"}, {"config", cj}};
  io::write_snapshot_file(files.g_snapshots(), g);

  io::SnapshotFile phi;
  phi.grid = snaps.grid;
  phi.layout = "vertex";
  phi.components = snaps.grid.dim();
  phi.times = snaps.times;
  phi.matrix = vertex_snapshot_matrix(tr.phi_tilde, t0, snaps.dt());
  phi.meta = {{"quantity", "phi_tilde"}, {"config", cj}};
  io::write_snapshot_file(files.phi_snapshots(), phi);

  CsvWriter log(files.objective_log(), cj, "k,t,matching,regularization,penalty,total,iterations,warning");
  for (std::size_t k = 0; k < ts.times.size(); ++k) {
    const ObjectiveValue& o = ts.objectives[k];
    log.row(k, ts.times[k], o.matching, o.regularization, o.penalty, o.total, ts.iterations[k],
            static_cast<int>(ts.warnings[k]));
  }

  double min_jac = INFINITY;
  for (const VertexField& p : tr.phi_tilde) min_jac = std::min(min_jac, min_jacobian(p));
  json summary = {{"config", cj},
                  {"stage", "register"},
                  {"ref_index", ts.ref_index},
                  {"optimizer_warnings", ts.warning_count()},
                  {"flagged_vertices", tr.flagged_vertices},
                  {"min_forward_det", tr.min_forward_det},
                  {"min_phi_tilde_jacobian", min_jac},
                  {"seconds", {{"register", t_register}, {"transform", t_transform}}}};
  io::write_json(files.register_summary(), summary);
  return summary;
}

json run_train_eval(const ExperimentConfig& cfg) {
  validate(cfg);
  const StageFiles files{cfg.output_dir};
  for (const auto& p : {files.snapshots(), files.g_snapshots(), files.phi_snapshots()})
    require_file(p, p == files.snapshots() ? "hf-solve" : "register");
  const json cj = config_to_json(cfg);
  const auto stage_start = Clock::now();

  const io::SnapshotFile uf = io::read_snapshot_file(files.snapshots());
  const io::SnapshotFile gf = io::read_snapshot_file(files.g_snapshots());
  const io::SnapshotFile pf = io::read_snapshot_file(files.phi_snapshots());
  const Grid& grid = uf.grid;
  const int nc = uf.components;
  if (!(gf.grid == grid) || !(pf.grid == grid) || gf.matrix.cols() != uf.matrix.cols() ||
      pf.matrix.cols() != uf.matrix.cols())
    throw ConfigError("snapshot, G and phi files do not match");

  // models
  std::set<int> all(cfg.ranks.begin(), cfg.ranks.end());
  all.insert(cfg.jacobian_ranks.begin(), cfg.jacobian_ranks.end());
  all.insert(cfg.bound_ranks.begin(), cfg.bound_ranks.end());
  all.insert(cfg.speedup_rank);
  OfflineOptions oo;
  oo.phi_offset = cfg.phi_offset;
  std::map<int, TSDMDModel> ts_models;
  std::map<int, DMDModel> dmd_models;
  auto start = Clock::now();
  for (int n : all) {
    ts_models.emplace(n, offline(gf.matrix, pf.matrix, grid, nc, n, oo));
    dmd_models.emplace(n, baseline(uf.matrix, n));
  }
  const double t_offline = seconds_since(start);
  json model_info = json::array();
  for (int n : all) {
    const TSDMDModel& m = ts_models.at(n);
    const DMDModel& d = dmd_models.at(n);
    model_info.push_back({{"n", n},
                          {"tsdmd_g_rank", m.dmd_g.rank()},
                          {"tsdmd_phi_rank", m.dmd_phi.rank()},
                          {"dmd_rank", d.rank()},
                          {"ill_conditioned", m.dmd_g.ill_conditioned || m.dmd_phi.ill_conditioned || d.ill_conditioned},
                          {"rank_deficient", m.dmd_g.rank_deficient || m.dmd_phi.rank_deficient || d.rank_deficient}});
    if (cfg.save_models) {
      fs::create_directories(files.models());
      io::write_tsdmd_model(files.models() / ("tsdmd_n" + std::to_string(n)), m);
      io::write_dmd_model(files.models() / ("dmd_n" + std::to_string(n) + ".dmd"), d);
    }
  }

  // HF references, one batched solve per window; tau_HF(t) is the wall-clock
  // from t = 0 to t
  const ProblemSpec problem = problem_of(cfg);
  struct Window {
    std::string name;
    std::array<double, 2> span;
    std::uint64_t seed;
    std::vector<double> times;
    SnapshotSet hf;
  };
  std::vector<Window> windows = {{"interp", cfg.interp_window, cfg.seed, {}, {}},
                                 {"extrap", cfg.extrap_window, cfg.seed + 1, {}, {}}};
  start = Clock::now();
  for (Window& w : windows) {
    w.times = sorted_samples(w.span[0], w.span[1], cfg.samples, w.seed);
    w.hf = solve_at(problem, grid, w.times);
  }
  const double t_reference = seconds_since(start);

  // errors
  json averages = json::object(), maxima = json::object();
  {
    CsvWriter samples(files.error_samples(), cj, "method,n,window,t,component,error");
    CsvWriter avg(files.error_averages(), cj, "method,n,window,t0,t1,component,E_a");
    for (int n : cfg.ranks) {
      const TSDMDModel& m = ts_models.at(n);
      const DMDModel& d = dmd_models.at(n);
      for (const Window& w : windows) {
        const FieldBatchEval hf = [&w](std::span<const double> ts) {
          if (!std::equal(ts.begin(), ts.end(), w.times.begin(), w.times.end()))
            throw ConfigError("reference cache mismatch");
          return w.hf.fields;
        };
        const ErrorReport reports[2] = {
            avg_error([&m](double t) { return online(m, t); }, hf, w.span[0], w.span[1], cfg.samples,
                      w.seed, "tsdmd", n),
            avg_error([&](double t) { return predict_field(d, grid, nc, t); }, hf, w.span[0], w.span[1],
                      cfg.samples, w.seed, "dmd", n)};
        for (const ErrorReport& r : reports) {
          std::vector<std::size_t> order(r.times.size());
          std::iota(order.begin(), order.end(), std::size_t{0});
          std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return r.times[a] < r.times[b]; });
          for (std::size_t k : order)
            for (int c = 0; c < nc; ++c) samples.row(r.method, n, w.name, r.times[k], c, r.errors[k][c]);
          for (int c = 0; c < nc; ++c) avg.row(r.method, n, w.name, w.span[0], w.span[1], c, r.average[c]);
          averages[r.method][w.name][std::to_string(n)] = r.average;
          std::vector<double> mx(nc, 0.0);
          for (const auto& e : r.errors)
            for (int c = 0; c < nc; ++c) mx[c] = std::max(mx[c], e[c]);
          maxima[r.method][w.name][std::to_string(n)] = mx;
        }
      }
    }
  }

  // singular value decay of U, G and Phi~
  const int nsv = static_cast<int>(std::min({uf.matrix.rows(), gf.matrix.rows(), pf.matrix.rows(), uf.matrix.cols()}));
  const std::vector<double> sv_u = sv_decay(uf.matrix, nsv), sv_g = sv_decay(gf.matrix, nsv),
                            sv_p = sv_decay(pf.matrix, nsv);
  {
    CsvWriter sv(files.sv_decay(), cj, "n,raw,g,phi_tilde");
    for (int k = 0; k < nsv; ++k) sv.row(k + 1, sv_u[k], sv_g[k], sv_p[k]);
  }

  // Jacobian minima of the unclamped reduced de-transformer
  json jac = json::object();
  {
    CsvWriter jw(files.jacobian(), cj, "n,t,min_jacobian");
    const std::vector<double> jt = sorted_samples(0.0, cfg.final_time, cfg.jacobian_samples, cfg.seed + 2);
    for (int n : cfg.jacobian_ranks) {
      double lo = INFINITY;
      int positive = 0;
      for (double t : jt) {
        const double mj = min_jacobian(online_phi(ts_models.at(n), t, false));
        jw.row(n, t, mj);
        lo = std::min(lo, mj);
        positive += mj > 0.0;
      }
      jac[std::to_string(n)] = {{"min", lo}, {"positive", positive}, {"samples", jt.size()}};
    }
  }

  // Theorem-1 check on the training times (1D)
  json bounds = json::object();
  if (!cfg.bound_ranks.empty()) {
    CsvWriter bw(files.error_bound(), cj,
                 "n,delta,delta_g,delta_phi,c1,lhs,lhs_raw,bound,bound_with_volume,ratio,a1,a2,"
                 "decomposition_floor,holds,holds_raw");
    const std::vector<CellField> u_N = cell_columns(uf), g_N = cell_columns(gf);
    const std::vector<VertexField> phi = vertex_columns(pf);
    for (int n : cfg.bound_ranks) {
      const TSDMDModel& m = ts_models.at(n);
      std::vector<CellField> g_n;
      std::vector<VertexField> phi_n;
      for (double t : uf.times) {
        g_n.push_back(online_g(m, t));
        phi_n.push_back(online_phi(m, t));
      }
      const ErrorBoundReport r = check_error_bound(u_N, g_N, g_n, phi, phi_n);
      bw.row(n, r.delta, r.delta_g, r.delta_phi, r.c1, r.lhs, r.lhs_raw, r.bound, r.bound_with_volume,
             r.ratio, r.a1, r.a2, r.decomposition_floor, static_cast<int>(r.holds),
             static_cast<int>(r.holds_raw));
      bounds[std::to_string(n)] = {{"delta", r.delta}, {"c1", r.c1}, {"lhs", r.lhs},
                                   {"bound", r.bound}, {"ratio", r.ratio}, {"holds", r.holds},
                                   {"lhs_raw", r.lhs_raw}, {"holds_raw", r.holds_raw}};
    }
  }

  // speed-up at speedup_rank over all sampled times
  json timing;
  {
    const TSDMDModel& m = ts_models.at(cfg.speedup_rank);
    std::vector<double> times, tau_hf, tau_rom;
    for (const Window& w : windows) {
      times.insert(times.end(), w.times.begin(), w.times.end());
      tau_hf.insert(tau_hf.end(), w.hf.wall_clock.begin(), w.hf.wall_clock.end());
    }
    (void)online(m, times.front());  // warm-up, not timed
    for (double t : times) {
      const auto s = Clock::now();
      const CellField u = online(m, t);
      tau_rom.push_back(seconds_since(s));
      if (!std::isfinite(u.values.front())) throw NumericalError("non-finite ROM output at t = " + num(t));
    }
    const TimingReport tr = speedup(tau_hf, tau_rom);
    CsvWriter sw(files.speedup(), cj, "t,tau_hf,tau_rom");
    for (std::size_t k = 0; k < times.size(); ++k) sw.row(times[k], tau_hf[k], tau_rom[k]);
    timing = {{"n", cfg.speedup_rank},
              {"kappa", tr.kappa},
              {"sum_tau_hf", std::accumulate(tau_hf.begin(), tau_hf.end(), 0.0)},
              {"sum_tau_rom", std::accumulate(tau_rom.begin(), tau_rom.end(), 0.0)},
              {"samples", times.size()},
              {"clock", "steady_clock"},
              {"hf_method", "one batched solve per window from t = 0; tau_HF(t) is the elapsed time at t"},
              {"warm_up", "one untimed ROM evaluation before the timed loop"}};
  }

  json summary = {{"config", cj},
                  {"stage", "train-eval"},
                  {"E_a", averages},
                  {"E_max", maxima},
                  {"sv_decay", {{"raw", sv_u}, {"g", sv_g}, {"phi_tilde", sv_p}}},
                  {"jacobian_minima", jac},
                  {"error_bound", bounds},
                  {"speedup", timing},
                  {"models", model_info},
                  {"seconds",
                   {{"offline", t_offline}, {"hf_reference", t_reference}, {"total", seconds_since(stage_start)}}}};
  io::write_json(files.summary(), summary);
  return summary;
}

}  // namespace tsdmd
