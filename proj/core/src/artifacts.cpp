#include "nilcarpet/artifacts.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nilcarpet/error.hpp"

namespace nilcarpet {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json header(const Config& config, const char* kind) {
  ordered_json j;
  j["format"] = std::string("nilcarpet.") + kind;
  j["version"] = kArtifactVersion;
  j["config_hash"] = config_hash(config);
  j["seed"] = config.seed;
  return j;
}

ordered_json carpet_json(const CarpetSpec& spec) {
  ordered_json j;
  j["dim"] = spec.dim;
  j["k_seq"] = spec.k_seq;
  j["depth"] = spec.depth;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

Construction construct(const Config& config) {
  config.validate();
  Construction c{config, config.carpet(), {}, {}};
  c.packing = exclude(pack(config.shape(), c.carpet, config.pack_depth), config.exclude);
  c.group = build_group(c.packing);
  return c;
}

BuildSummary summarize(const Construction& c) {
  BuildSummary s;
  s.measure_exact = measure_exact(c.carpet);
  s.delta1_measure = project_delta1(c.carpet).measure();
  s.delta1_measure_exact = delta1_measure_exact(c.carpet);
  s.coverage = coverage_mc(c.packing, c.config.samples, c.config.seed);
  s.removed_cells = c.packing.cells.size();
  s.balls = c.packing.balls.size();
  s.lattice_generators = c.group.lattice.size();
  s.inversion_generators = c.group.balls.size();
  s.excluded_balls = c.group.excluded.size();
  s.full_limit_set = c.group.full_limit_set();
  const double removed = 1.0 - s.measure_exact;
  s.limit_set_residual = 1.0 - s.coverage.estimate * removed - s.measure_exact;
  return s;
}

std::string carpet_artifact(const Config& config, const CarpetSpec& spec, const std::vector<RemovedCell>& cells) {
  auto j = header(config, "carpet");
  j["carpet"] = carpet_json(spec);
  j["removed_cell_count"] = cells.size();
  j["measure_exact"] = measure_exact(spec);
  auto list = ordered_json::array();
  for (const auto& c : cells) {
    ordered_json e;
    e["level"] = c.id.level;
    e["address"] = c.id.indices;
    e["center"] = c.box.center;
    e["half_width"] = c.box.half_width;
    list.push_back(std::move(e));
  }
  j["cells"] = std::move(list);
  return dump(j);
}

std::string packing_artifact(const Config& config, const Packing& packing) {
  auto j = header(config, "packing");
  j["algebra"] = to_string(packing.shape.algebra);
  j["n"] = packing.shape.n;
  j["carpet"] = carpet_json(packing.carpet);
  j["pack_depth"] = packing.pack_depth;
  j["ball_count"] = packing.balls.size();
  auto list = ordered_json::array();
  for (const auto& b : packing.balls) {
    ordered_json e;
    e["cell"] = packing.cells[b.cell].id.indices;
    e["cell_level"] = packing.cells[b.cell].id.level;
    e["depth"] = b.depth;
    auto center = to_chart(HalfSpacePoint::at(b.ball.center));
    center.pop_back();  // u = 0
    e["center"] = center;
    e["radius"] = b.ball.radius;
    e["excluded"] = b.excluded;
    list.push_back(std::move(e));
  }
  j["balls"] = std::move(list);
  return dump(j);
}

std::string group_artifact(const Config& config, const GroupSpec& group) {
  auto j = header(config, "group");
  j["algebra"] = to_string(group.shape.algebra);
  j["n"] = group.shape.n;
  j["carpet"] = carpet_json(group.carpet);
  j["pack_depth"] = group.pack_depth;
  auto lattice = ordered_json::array();
  for (const auto& s : group.lattice) {
    auto x = to_chart(HalfSpacePoint::at(s));
    x.pop_back();
    lattice.push_back(x);
  }
  j["lattice"] = std::move(lattice);
  auto central = ordered_json::array();
  for (const auto& c : group.central) {
    ordered_json e;
    e["commutator_of"] = {c.a, c.b};
    e["vertical"] = c.step.v.coords();
    central.push_back(std::move(e));
  }
  j["central"] = std::move(central);
  j["column_lo"] = group.column_lo;
  j["column_hi"] = group.column_hi;
  j["inversion_generators"] = group.balls.size();
  auto excluded = ordered_json::array();
  for (const auto& e : group.excluded) excluded.push_back(e.packing_index);
  j["excluded_balls"] = std::move(excluded);
  j["full_limit_set"] = group.full_limit_set();
  return dump(j);
}

std::string stretch_artifact(const Config& config, const StretchMap& map) {
  auto j = header(config, "stretch");
  j["t"] = map.t();
  j["t1"] = map.t1();
  auto list = ordered_json::array();
  for (const auto& iv : map.delta1().intervals()) list.push_back({iv.lo, iv.hi});
  j["delta1"] = std::move(list);
  j["delta1_measure"] = map.delta1().measure();
  return dump(j);
}

std::string summary_artifact(const Config& config, const BuildSummary& s) {
  auto j = header(config, "summary");
  j["config"] = ordered_json::parse(canonical_json(config));
  j["measure_exact"] = s.measure_exact;
  j["delta1_measure"] = s.delta1_measure;
  j["delta1_measure_exact"] = s.delta1_measure_exact;
  j["coverage"] = {{"estimate", s.coverage.estimate}, {"std_error", s.coverage.std_error}, {"samples", s.coverage.samples}};
  j["removed_cells"] = s.removed_cells;
  j["balls"] = s.balls;
  j["lattice_generators"] = s.lattice_generators;
  j["inversion_generators"] = s.inversion_generators;
  j["excluded_balls"] = s.excluded_balls;
  j["full_limit_set"] = s.full_limit_set;
  j["limit_set_residual"] = s.limit_set_residual;
  return dump(j);
}

void write_output(const std::string& path, const std::string& content, bool overwrite) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!overwrite && fs::exists(path, ec)) {
    fail(ErrorCode::io, "refusing to overwrite existing output '" + path + "'");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) fail(ErrorCode::io, "error while writing '" + path + "'");
}

}  // namespace nilcarpet
