// SPDX-License-Identifier: Apache-2.0
#include "tsdmd/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "tsdmd/errors.hpp"

namespace tsdmd::io {

namespace {

constexpr const char* kSnapshotMagic = "TSDMD-SNAPSHOTS";
constexpr const char* kDmdMagic = "TSDMD-DMD";
constexpr int kVersion = 1;

void write_doubles(std::ostream& os, const double* data, std::size_t count) {
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t bits;
      std::memcpy(&bits, data + i, sizeof bits);
      bits = __builtin_bswap64(bits);
      os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
}

void read_doubles(std::istream& is, double* data, std::size_t count) {
  is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::size_t>(is.gcount()) != count * sizeof(double))
    throw ConfigError("truncated binary payload");
  if constexpr (std::endian::native != std::endian::little) {
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t bits;
      std::memcpy(&bits, data + i, sizeof bits);
      bits = __builtin_bswap64(bits);
      std::memcpy(data + i, &bits, sizeof bits);
    }
  }
}

void write_complex(std::ostream& os, const Eigen::MatrixXcd& m) {
  // std::complex<double> is layout-compatible with double[2]
  write_doubles(os, reinterpret_cast<const double*>(m.data()), static_cast<std::size_t>(m.size()) * 2);
}

void read_complex(std::istream& is, Eigen::MatrixXcd& m) {
  read_doubles(is, reinterpret_cast<double*>(m.data()), static_cast<std::size_t>(m.size()) * 2);
}

json read_header(std::istream& is, const char* magic) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("missing file header");
  json h;
  try {
    h = json::parse(line);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed file header: ") + e.what());
  }
  if (h.value("magic", "") != magic) throw ConfigError(std::string("bad magic, expected ") + magic);
  if (h.value("version", 0) != kVersion) throw ConfigError("unsupported file version");
  if (h.value("endianness", "little") != "little") throw ConfigError("unsupported endianness");
  return h;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open '" + path.string() + "'");
  return is;
}

}  // namespace

json grid_to_json(const Grid& g) {
  json b = json::array(), c = json::array();
  for (int a = 0; a < g.dim(); ++a) {
    b.push_back({g.bounds(a).lo, g.bounds(a).hi});
    c.push_back(g.cells(a));
  }
  return {{"dim", g.dim()}, {"bounds", b}, {"cells", c}};
}

Grid grid_from_json(const json& j) {
  try {
    std::vector<Interval> b;
    std::vector<int> c;
    for (const auto& iv : j.at("bounds")) b.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
    for (const auto& n : j.at("cells")) c.push_back(n.get<int>());
    return build_grid(b, c);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed grid spec: ") + e.what());
  }
}

void write_snapshot_file(const std::filesystem::path& path, const SnapshotFile& f) {
  json h = {{"magic", kSnapshotMagic},
            {"version", kVersion},
            {"rows", f.matrix.rows()},
            {"cols", f.matrix.cols()},
            {"t0", f.matrix.t0},
            {"dt", f.matrix.dt},
            {"grid", grid_to_json(f.grid)},
            {"layout", f.layout},
            {"components", f.components},
            {"component_major", true},
            {"column_major", true},
            {"endianness", "little"},
            {"times", f.times},
            {"meta", f.meta}};
  std::ofstream os = open_out(path);
  os << h.dump() << '\n';
  write_doubles(os, f.matrix.data.data(), static_cast<std::size_t>(f.matrix.data.size()));
  if (!os) throw ConfigError("write failed for '" + path.string() + "'");
}

SnapshotFile read_snapshot_file(const std::filesystem::path& path) {
  std::ifstream is = open_in(path);
  const json h = read_header(is, kSnapshotMagic);
  SnapshotFile f;
  try {
    f.grid = grid_from_json(h.at("grid"));
    f.layout = h.at("layout").get<std::string>();
    f.components = h.at("components").get<int>();
    f.times = h.at("times").get<std::vector<double>>();
    f.meta = h.value("meta", json::object());
    f.matrix.t0 = h.at("t0").get<double>();
    f.matrix.dt = h.at("dt").get<double>();
    const auto rows = h.at("rows").get<Eigen::Index>();
    const auto cols = h.at("cols").get<Eigen::Index>();
    f.matrix.data.resize(rows, cols);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed snapshot header: ") + e.what());
  }
  const std::size_t expect = f.layout == "vertex" ? f.grid.num_vertices() * f.grid.dim()
                                                  : f.grid.num_cells() * f.components;
  if (static_cast<std::size_t>(f.matrix.data.rows()) != expect)
    throw ConfigError("snapshot file: row count does not match grid layout");
  read_doubles(is, f.matrix.data.data(), static_cast<std::size_t>(f.matrix.data.size()));
  return f;
}

SnapshotFile from_snapshot_set(const SnapshotSet& set, json meta) {
  SnapshotFile f;
  f.grid = set.grid;
  f.layout = "cell";
  f.components = set.fields.empty() ? 1 : set.fields.front().components;
  f.times = set.times;
  f.matrix = cell_snapshot_matrix(set.fields, set.times.empty() ? 0.0 : set.times.front(), set.dt());
  meta["problem"] = set.problem;
  meta["cfl"] = set.cfl;
  // timings go to hf_timing.json so the snapshot file is reproducible
  meta["steps"] = set.steps;
  f.meta = std::move(meta);
  return f;
}

SnapshotSet to_snapshot_set(const SnapshotFile& f) {
  if (f.layout != "cell") throw ConfigError("snapshot file does not hold cell fields");
  SnapshotSet s;
  s.grid = f.grid;
  s.times = f.times;
  s.problem = f.meta.value("problem", "");
  s.cfl = f.meta.value("cfl", 0.5);
  s.steps = f.meta.value("steps", 0L);
  for (Eigen::Index k = 0; k < f.matrix.data.cols(); ++k) {
    const auto col = f.matrix.data.col(k);
    s.fields.push_back(unflatten_cells(f.grid, f.components, {col.data(), static_cast<std::size_t>(col.size())}));
  }
  return s;
}

void write_dmd_model(const std::filesystem::path& path, const DMDModel& m) {
  std::vector<int> dropped(m.dropped.begin(), m.dropped.end());
  json h = {{"magic", kDmdMagic},
            {"version", kVersion},
            {"endianness", "little"},
            {"rows", m.state_dim()},
            {"rank", m.rank()},
            {"requested_rank", m.requested_rank},
            {"t0", m.t0},
            {"dt", m.dt},
            {"thresholds",
             {{"sigma_drop", m.thresholds.sigma_drop},
              {"lambda_drop", m.thresholds.lambda_drop},
              {"cond_limit", m.thresholds.cond_limit}}},
            {"flags", {{"rank_deficient", m.rank_deficient}, {"ill_conditioned", m.ill_conditioned}}},
            {"dropped", dropped},
            {"payload", "basis(N x r), sigma(r), W(r x r complex), lambda(r complex), omega(r complex), b(r complex)"}};
  std::ofstream os = open_out(path);
  os << h.dump() << '\n';
  write_doubles(os, m.basis.data(), static_cast<std::size_t>(m.basis.size()));
  write_doubles(os, m.sigma.data(), static_cast<std::size_t>(m.sigma.size()));
  write_complex(os, m.W);
  write_complex(os, m.lambda);
  write_complex(os, m.omega);
  write_complex(os, m.b);
  if (!os) throw ConfigError("write failed for '" + path.string() + "'");
}

DMDModel read_dmd_model(const std::filesystem::path& path) {
  std::ifstream is = open_in(path);
  const json h = read_header(is, kDmdMagic);
  DMDModel m;
  Eigen::Index rows = 0, r = 0;
  try {
    rows = h.at("rows").get<Eigen::Index>();
    r = h.at("rank").get<Eigen::Index>();
    m.requested_rank = h.at("requested_rank").get<int>();
    m.t0 = h.at("t0").get<double>();
    m.dt = h.at("dt").get<double>();
    m.thresholds.sigma_drop = h.at("thresholds").at("sigma_drop").get<double>();
    m.thresholds.lambda_drop = h.at("thresholds").at("lambda_drop").get<double>();
    m.thresholds.cond_limit = h.at("thresholds").at("cond_limit").get<double>();
    m.rank_deficient = h.at("flags").at("rank_deficient").get<bool>();
    m.ill_conditioned = h.at("flags").at("ill_conditioned").get<bool>();
    for (int d : h.at("dropped").get<std::vector<int>>()) m.dropped.push_back(static_cast<char>(d));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed DMD header: ") + e.what());
  }
  m.basis.resize(rows, r);
  m.sigma.resize(r);
  m.W.resize(r, r);
  m.lambda.resize(r);
  m.omega.resize(r);
  m.b.resize(r);
  read_doubles(is, m.basis.data(), static_cast<std::size_t>(m.basis.size()));
  read_doubles(is, m.sigma.data(), static_cast<std::size_t>(r));
  read_complex(is, m.W);
  Eigen::MatrixXcd tmp(r, 1);
  read_complex(is, tmp);
  m.lambda = tmp.col(0);
  read_complex(is, tmp);
  m.omega = tmp.col(0);
  read_complex(is, tmp);
  m.b = tmp.col(0);
  return m;
}

void write_tsdmd_model(const std::filesystem::path& dir, const TSDMDModel& m) {
  std::filesystem::create_directories(dir);
  write_dmd_model(dir / "g.dmd", m.dmd_g);
  write_dmd_model(dir / "phi.dmd", m.dmd_phi);
  write_json(dir / "manifest.json",
             {{"grid", grid_to_json(m.grid)},
              {"components", m.components},
              {"n", m.n},
              {"mode", m.mode == InterpMode::multilinear ? "multilinear" : "nearest"},
              {"phi_offset", to_string(m.phi_offset_kind)},
              {"models", {{"g", "g.dmd"}, {"phi", "phi.dmd"}}}});
  if (m.phi_offset.size() > 0) {
    std::ofstream os = open_out(dir / "phi_offset.bin");
    write_doubles(os, m.phi_offset.data(), static_cast<std::size_t>(m.phi_offset.size()));
  }
}

TSDMDModel read_tsdmd_model(const std::filesystem::path& dir) {
  const json man = read_json(dir / "manifest.json");
  TSDMDModel m;
  try {
    m.grid = grid_from_json(man.at("grid"));
    m.components = man.at("components").get<int>();
    m.n = man.at("n").get<int>();
    m.mode = man.at("mode").get<std::string>() == "nearest" ? InterpMode::nearest : InterpMode::multilinear;
    m.phi_offset_kind = phi_offset_from_string(man.value("phi_offset", "none"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model manifest: ") + e.what());
  }
  m.dmd_g = read_dmd_model(dir / "g.dmd");
  m.dmd_phi = read_dmd_model(dir / "phi.dmd");
  if (m.phi_offset_kind != PhiOffset::none) {
    std::ifstream is = open_in(dir / "phi_offset.bin");
    m.phi_offset.resize(static_cast<Eigen::Index>(m.dmd_phi.state_dim()));
    read_doubles(is, m.phi_offset.data(), static_cast<std::size_t>(m.phi_offset.size()));
  }
  return m;
}

json transform_set_to_json(const TransformSet& ts) {
  json fields = json::array(), objectives = json::array();
  for (const auto& f : ts.fields) fields.push_back(f.coeffs);
  for (const auto& o : ts.objectives)
    objectives.push_back({{"matching", o.matching}, {"regularization", o.regularization}, {"total", o.total}});
  const int dim = ts.fields.empty() ? 1 : ts.fields.front().dim;
  json box = json::array();
  if (!ts.fields.empty())
    for (int a = 0; a < dim; ++a) box.push_back({ts.fields.front().box[a].lo, ts.fields.front().box[a].hi});
  std::vector<int> warnings(ts.warnings.begin(), ts.warnings.end());
  return {{"t_ref", ts.t_ref},
          {"ref_index", ts.ref_index},
          {"order", ts.order},
          {"eps", ts.eps},
          {"dim", dim},
          {"box", box},
          {"coefficient_layout", "c * M^d + j + M * k"},
          {"times", ts.times},
          {"coefficients", fields},
          {"objectives", objectives},
          {"iterations", ts.iterations},
          {"warnings", warnings}};
}

TransformSet transform_set_from_json(const json& j) {
  TransformSet ts;
  try {
    ts.t_ref = j.at("t_ref").get<double>();
    ts.ref_index = j.at("ref_index").get<std::size_t>();
    ts.order = j.at("order").get<int>();
    ts.eps = j.at("eps").get<double>();
    ts.times = j.at("times").get<std::vector<double>>();
    const int dim = j.at("dim").get<int>();
    std::array<Interval, 2> box{Interval{0, 1}, Interval{0, 1}};
    for (int a = 0; a < dim; ++a) box[a] = {j.at("box").at(a).at(0).get<double>(), j.at("box").at(a).at(1).get<double>()};
    for (const auto& c : j.at("coefficients")) {
      DisplacementField f;
      f.dim = dim;
      f.order = ts.order;
      f.box = box;
      f.coeffs = c.get<std::vector<double>>();
      if (f.coeffs.size() != dim * f.per_component()) throw ConfigError("transform set: coefficient count mismatch");
      ts.fields.push_back(std::move(f));
    }
    for (const auto& o : j.at("objectives"))
      ts.objectives.push_back({o.at("matching").get<double>(), o.at("regularization").get<double>(),
                               o.at("total").get<double>()});
    ts.iterations = j.at("iterations").get<std::vector<int>>();
    for (int w : j.at("warnings").get<std::vector<int>>()) ts.warnings.push_back(static_cast<char>(w));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed transform set: ") + e.what());
  }
  return ts;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream os = open_out(path);
  os << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
  std::ifstream is = open_in(path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

}  // namespace tsdmd::io
