// SPDX-License-Identifier: Apache-2.0
//
// File formats. Snapshot and DMD files are a single JSON header line followed
// by raw little-endian float64 data (column-major; complex values interleaved
// real/imaginary).

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "tsdmd/dmd.hpp"
#include "tsdmd/hf_solver.hpp"
#include "tsdmd/mesh.hpp"
#include "tsdmd/pipeline.hpp"
#include "tsdmd/registration.hpp"

namespace tsdmd::io {

using nlohmann::json;

json grid_to_json(const Grid& grid);
Grid grid_from_json(const json& j);

struct SnapshotFile {
  SnapshotMatrix matrix;
  Grid grid;
  std::string layout = "cell";  // "cell" or "vertex"
  int components = 1;
  std::vector<double> times;
  json meta = json::object();
};

void write_snapshot_file(const std::filesystem::path& path, const SnapshotFile& file);
SnapshotFile read_snapshot_file(const std::filesystem::path& path);

SnapshotFile from_snapshot_set(const SnapshotSet& set, json meta = json::object());
SnapshotSet to_snapshot_set(const SnapshotFile& file);

void write_dmd_model(const std::filesystem::path& path, const DMDModel& model);
DMDModel read_dmd_model(const std::filesystem::path& path);

/// Directory with manifest.json, g.dmd and phi.dmd.
void write_tsdmd_model(const std::filesystem::path& dir, const TSDMDModel& model);
TSDMDModel read_tsdmd_model(const std::filesystem::path& dir);

json transform_set_to_json(const TransformSet& ts);
TransformSet transform_set_from_json(const json& j);

void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

}  // namespace tsdmd::io
