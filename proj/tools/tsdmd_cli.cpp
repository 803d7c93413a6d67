// SPDX-License-Identifier: Apache-2.0
//
// tsdmd hf-solve | register | train-eval | bench
// Exit codes: 0 success, 2 configuration or I/O error, 3 numerical failure.

#include <omp.h>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tsdmd/errors.hpp"
#include "tsdmd/experiment.hpp"
#include "tsdmd/io.hpp"

namespace {

using tsdmd::ExperimentConfig;
using nlohmann::json;

struct Common {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "experiment config (JSON)");
  cmd->add_option("--preset", c.preset, "built-in config: test1, test2, test3, test3-window08, test3-tref1");
  cmd->add_option("--seed", c.seed, "sampling seed (overrides the config)");
  cmd->add_option("--threads", c.threads, "OpenMP threads (0: runtime default)");
  cmd->add_option("--out", c.out, "output directory (overrides the config)");
}

ExperimentConfig resolve(const Common& c) {
  json j = json::object();
  if (!c.config.empty()) j = tsdmd::io::read_json(c.config);
  if (!c.preset.empty()) {
    if (j.contains("preset")) throw tsdmd::ConfigError("--preset conflicts with the config's preset key");
    j["preset"] = c.preset;
  }
  if (c.config.empty() && c.preset.empty()) throw tsdmd::ConfigError("one of --config or --preset is required");
  if (c.seed) j["seed"] = *c.seed;
  if (!c.out.empty()) j["output_dir"] = c.out;
  return tsdmd::config_from_json(j);
}

void set_threads(int threads) {
  if (threads < 0) throw tsdmd::ConfigError("--threads must be >= 0");
  if (threads > 0) omp_set_num_threads(threads);
}

json headline(const json& train) {
  json h = {{"speedup", train.at("speedup").at("kappa")}, {"E_a", json::object()}};
  const std::string n = std::to_string(train.at("speedup").at("n").get<int>());
  for (const char* method : {"tsdmd", "dmd"})
    for (const char* window : {"interp", "extrap"})
      if (train["E_a"][method][window].contains(n)) h["E_a"][method][window] = train["E_a"][method][window][n];
  h["n"] = train.at("speedup").at("n");
  return h;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transformed-snapshot DMD experiments"};
  app.require_subcommand(1);
  Common solve_opts, reg_opts, eval_opts, bench_opts;
  add_common(app.add_subcommand("hf-solve", "solve the full-order problem and write snapshots"), solve_opts);
  add_common(app.add_subcommand("register", "register snapshots and write G / phi~ snapshots"), reg_opts);
  add_common(app.add_subcommand("train-eval", "fit TS-DMD and DMD, write error/timing reports"), eval_opts);
  auto* bench = app.add_subcommand("bench", "run all stages (all three benchmark cases by default)");
  add_common(bench, bench_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("hf-solve")) {
      set_threads(solve_opts.threads);
      const json s = tsdmd::run_hf_solve(resolve(solve_opts));
      std::cout << "wrote " << s["config"]["output_dir"].get<std::string>() << " (" << s["seconds"] << " s)\n";
    } else if (app.got_subcommand("register")) {
      set_threads(reg_opts.threads);
      const json s = tsdmd::run_register(resolve(reg_opts));
      std::cout << "registered: " << s["optimizer_warnings"] << " optimizer warnings, min forward det "
                << s["min_forward_det"] << "\n";
    } else if (app.got_subcommand("train-eval")) {
      set_threads(eval_opts.threads);
      const json s = tsdmd::run_train_eval(resolve(eval_opts));
      std::cout << headline(s).dump(2) << "\n";
    } else {
      set_threads(bench_opts.threads);
      std::vector<ExperimentConfig> cases;
      if (bench_opts.config.empty() && bench_opts.preset.empty()) {
        const std::string root = bench_opts.out.empty() ? "out" : bench_opts.out;
        for (const char* name : {"test1", "test2", "test3"}) {
          Common c = bench_opts;
          c.preset = name;
          c.out = (std::filesystem::path(root) / name).string();
          cases.push_back(resolve(c));
        }
      } else {
        cases.push_back(resolve(bench_opts));
      }
      json all = json::object();
      for (const ExperimentConfig& cfg : cases) {
        std::cout << "[" << cfg.name << "] hf-solve" << std::endl;
        tsdmd::run_hf_solve(cfg);
        std::cout << "[" << cfg.name << "] register" << std::endl;
        tsdmd::run_register(cfg);
        std::cout << "[" << cfg.name << "] train-eval" << std::endl;
        const json s = tsdmd::run_train_eval(cfg);
        all[cfg.name] = headline(s);
        all[cfg.name]["config"] = s["config"];
        std::cout << all[cfg.name]["E_a"].dump() << " kappa " << all[cfg.name]["speedup"] << std::endl;
      }
      const std::filesystem::path root = cases.size() > 1 ? std::filesystem::path(bench_opts.out.empty() ? "out" : bench_opts.out)
                                                          : std::filesystem::path(cases.front().output_dir);
      tsdmd::io::write_json(root / "bench_summary.json", all);
    }
  } catch (const tsdmd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const tsdmd::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
