#pragma once

// Run configuration: one JSON document, validated on load. Every artifact
// and report carries the hash of its canonical form.

#include <cstdint>
#include <string>
#include <vector>

#include "nilcarpet/algebra.hpp"
#include "nilcarpet/carnot.hpp"
#include "nilcarpet/carpet.hpp"

namespace nilcarpet {

struct Tolerances {
  double isometry = 1e-12;
  double involution = 1e-10;
  double equivariance = 1e-9;
  double interval = 1e-12;
  double stretch = 1e-14;
  double mc_sigmas = 3.0;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct Config {
  Algebra algebra = Algebra::Real;
  int n = 3;
  std::vector<int> k_seq;  // explicit list, or empty when `base` is used
  int base = 3;            // k_j = base^j
  int depth = 3;
  int pack_depth = 2;
  std::vector<double> t_values{0.5, 1.0, 2.0};
  std::uint64_t seed = 1;
  std::vector<std::size_t> exclude;
  std::uint64_t samples = 10000;  // per-check sample count
  int witness_iterations = 12;
  Tolerances tolerances;

  CarnotShape shape() const { return {algebra, n}; }
  CarpetSpec carpet() const;

  /// Throws ErrorCode::invalid_argument naming the offending key.
  void validate() const;

  friend bool operator==(const Config&, const Config&) = default;
};

Config default_config();
/// Parses and validates; unknown keys are rejected.
Config parse_config(const std::string& json_text);
/// Throws ErrorCode::io when the file cannot be read.
Config load_config(const std::string& path);

/// Canonical JSON: every field written, fixed key order, compact.
std::string canonical_json(const Config& c);
/// 16 hex digits of FNV-1a over the canonical JSON.
std::string config_hash(const Config& c);

}  // namespace nilcarpet
