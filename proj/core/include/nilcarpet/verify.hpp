#pragma once

// Named property suites over a configuration. Reports are deterministic in
// (config, seed) and carry no timing.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nilcarpet/config.hpp"

namespace nilcarpet {

struct SuiteFailure {
  std::string check;
  std::string inputs;
  double deviation = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::uint64_t cases = 0;
  std::uint64_t failure_count = 0;
  std::vector<SuiteFailure> failures;  // the first few
  double max_deviation = 0.0;          // over tolerance-bound checks
  std::vector<std::pair<std::string, double>> metrics;

  bool passed() const noexcept { return failure_count == 0; }
  double metric(const std::string& name) const;
};

/// carnot_isometry, inversion_involution, carpet_measure, stretch_exactness,
/// packing_disjoint, klein, equivariance, nontriviality, boundary_trivial.
const std::vector<std::string>& suite_names();

/// Throws ErrorCode::invalid_argument for an unknown name.
SuiteReport run_suite(const std::string& name, const Config& config, std::uint64_t seed);

std::string to_json(const SuiteReport& report);
std::string to_json(const std::vector<SuiteReport>& reports);

}  // namespace nilcarpet
