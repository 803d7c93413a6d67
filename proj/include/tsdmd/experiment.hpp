// SPDX-License-Identifier: Apache-2.0
//
// Experiment driver: configs for the three benchmark cases and the file-based
// stages hf-solve -> register -> train-eval. Each stage reads and writes only
// files in the output directory, so stages can be rerun independently.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tsdmd/hf_solver.hpp"
#include "tsdmd/pipeline.hpp"

namespace tsdmd {

struct ExperimentConfig {
  std::string name = "test1";
  ProblemKind problem = ProblemKind::advection1d;
  WaveOrientation wave_orientation = WaveOrientation::inward;
  std::vector<int> cells{4000};
  int K = 500;
  double final_time = 0.8;  // snapshots on [0, final_time]
  int order = 4;            // M
  double eps = 1e-3;
  std::optional<double> t_ref;  // default final_time / 2
  std::vector<int> ranks;
  std::array<double, 2> interp_window{0.0, 0.8};
  std::array<double, 2> extrap_window{0.8, 1.0};
  int samples = 100;
  std::uint64_t seed = 1;
  std::string output_dir = "out/test1";

  PhiOffset phi_offset = PhiOffset::none;
  double proximal_weight = 0.1;
  double fold_floor = 0.1;
  double fold_weight = 0.0;
  int max_iterations = 200;
  bool independent_registration = false;

  int speedup_rank = 13;
  std::vector<int> jacobian_ranks{1, 10};
  int jacobian_samples = 100;
  std::vector<int> bound_ranks;  // 1D only
  bool save_models = true;

  double resolved_t_ref() const { return t_ref.value_or(0.5 * final_time); }
};

std::vector<std::string> preset_names();
/// test1, test2, test3, test3-window08 (snapshots on [0, 0.8]), test3-tref1.
ExperimentConfig preset(const std::string& name);

/// Keys override the preset named by "preset" (default test1). Unknown keys
/// and invalid values throw ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);

ProblemSpec problem_of(const ExperimentConfig& cfg);
Grid grid_of(const ExperimentConfig& cfg);

/// File names inside the output directory.
struct StageFiles {
  std::filesystem::path dir;
  std::filesystem::path snapshots() const { return dir / "snapshots.bin"; }
  std::filesystem::path hf_timing() const { return dir / "hf_timing.json"; }
  std::filesystem::path transforms() const { return dir / "transforms.json"; }
  std::filesystem::path g_snapshots() const { return dir / "g_snapshots.bin"; }
  std::filesystem::path phi_snapshots() const { return dir / "phi_snapshots.bin"; }
  std::filesystem::path objective_log() const { return dir / "objective_log.csv"; }
  std::filesystem::path register_summary() const { return dir / "register_summary.json"; }
  std::filesystem::path models() const { return dir / "models"; }
  std::filesystem::path error_samples() const { return dir / "error_samples.csv"; }
  std::filesystem::path error_averages() const { return dir / "error_averages.csv"; }
  std::filesystem::path sv_decay() const { return dir / "sv_decay.csv"; }
  std::filesystem::path jacobian() const { return dir / "jacobian_minima.csv"; }
  std::filesystem::path speedup() const { return dir / "speedup.csv"; }
  std::filesystem::path error_bound() const { return dir / "error_bound.csv"; }
  std::filesystem::path summary() const { return dir / "summary.json"; }
};

/// Each stage returns its JSON summary (also written to disk).
nlohmann::json run_hf_solve(const ExperimentConfig& cfg);
nlohmann::json run_register(const ExperimentConfig& cfg);
nlohmann::json run_train_eval(const ExperimentConfig& cfg);

}  // namespace tsdmd
