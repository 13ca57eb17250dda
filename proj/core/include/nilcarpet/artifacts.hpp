#pragma once

// End-to-end construction from a config and versioned JSON artifacts.
// Serialized output depends only on (config, seed), never on timing or
// thread count.

#include <string>

#include "nilcarpet/config.hpp"
#include "nilcarpet/groups.hpp"
#include "nilcarpet/packing.hpp"
#include "nilcarpet/stretch.hpp"

namespace nilcarpet {

inline constexpr int kArtifactVersion = 1;

struct Construction {
  Config config;
  CarpetSpec carpet;
  Packing packing;
  GroupSpec group;
};

/// Carpet, packing (with the configured exclusions) and group.
Construction construct(const Config& config);

struct BuildSummary {
  double measure_exact = 0.0;
  double delta1_measure = 0.0;         // from the interval set
  double delta1_measure_exact = 0.0;   // closed form
  McEstimate coverage;                 // fraction of the removed set
  std::size_t removed_cells = 0;
  std::size_t balls = 0;
  std::size_t lattice_generators = 0;
  std::size_t inversion_generators = 0;
  std::size_t excluded_balls = 0;
  bool full_limit_set = true;
  /// 1 - coverage * m(removed) - m(K_D): measure of the column base left
  /// neither in the carpet nor in a packed ball.
  double limit_set_residual = 0.0;
};

BuildSummary summarize(const Construction& c);

std::string carpet_artifact(const Config& config, const CarpetSpec& spec, const std::vector<RemovedCell>& cells);
std::string packing_artifact(const Config& config, const Packing& packing);
std::string group_artifact(const Config& config, const GroupSpec& group);
std::string stretch_artifact(const Config& config, const StretchMap& map);
std::string summary_artifact(const Config& config, const BuildSummary& summary);

/// Writes `content` to `path`. Refuses to replace an existing file unless
/// `overwrite` is set. Throws ErrorCode::io on failure.
void write_output(const std::string& path, const std::string& content, bool overwrite = false);

}  // namespace nilcarpet
