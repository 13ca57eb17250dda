#include "nilcarpet/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nilcarpet/error.hpp"

namespace nilcarpet {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
  fail(ErrorCode::invalid_argument, "config key '" + key + "': " + what);
}

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    bad_key(key, "has the wrong type");
  }
}

std::uint64_t get_count(const json& j, const std::string& key) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<long long>() < 0)) {
    bad_key(key, "must be a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

int get_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) bad_key(key, "must be an integer");
  const auto v = j.get<long long>();
  if (v < -1'000'000'000LL || v > 1'000'000'000LL) bad_key(key, "is out of range");
  return static_cast<int>(v);
}

}  // namespace

CarpetSpec Config::carpet() const {
  CarpetSpec s;
  if (k_seq.empty()) {
    s = CarpetSpec::geometric(shape().dim(), base, depth);
  } else {
    s.dim = shape().dim();
    s.depth = depth;
    s.k_seq.assign(k_seq.begin(), k_seq.begin() + std::min<std::ptrdiff_t>(depth, static_cast<std::ptrdiff_t>(k_seq.size())));
  }
  return s;
}

void Config::validate() const {
  if (n < 2 || n > 16) bad_key("n", "must satisfy 2 <= n <= 16, got " + std::to_string(n));
  if (depth < 1) bad_key("depth", "must be >= 1, got " + std::to_string(depth));
  if (pack_depth < 0) bad_key("pack_depth", "must be >= 0, got " + std::to_string(pack_depth));
  if (k_seq.empty()) {
    if (base < 3 || base % 2 == 0) bad_key("base", "must be an odd integer >= 3, got " + std::to_string(base));
    if (std::pow(static_cast<double>(base), depth) > 1e9) bad_key("base", "base^depth exceeds 1e9");
  } else {
    if (static_cast<int>(k_seq.size()) < depth) {
      bad_key("k_seq", "has " + std::to_string(k_seq.size()) + " entries but depth is " + std::to_string(depth));
    }
    bool constant = true;
    bool increasing = true;
    for (std::size_t j = 0; j < k_seq.size(); ++j) {
      if (k_seq[j] < 3 || k_seq[j] % 2 == 0) {
        bad_key("k_seq", "entries must be odd integers >= 3, got " + std::to_string(k_seq[j]));
      }
      if (j > 0) {
        constant = constant && k_seq[j] == k_seq[j - 1];
        increasing = increasing && k_seq[j] > k_seq[j - 1];
      }
    }
    if (!constant && !increasing) bad_key("k_seq", "must be strictly increasing or constant");
  }
  if (t_values.empty()) bad_key("t_values", "must not be empty");
  for (double t : t_values) {
    if (!(t > 0.0) || !std::isfinite(t)) bad_key("t_values", "entries must be finite and > 0");
  }
  if (samples < 1000) bad_key("samples", "must be >= 1000");
  if (witness_iterations < 1) bad_key("witness_iterations", "must be >= 1");
  const std::pair<const char*, double> tols[] = {
      {"tolerances.isometry", tolerances.isometry},       {"tolerances.involution", tolerances.involution},
      {"tolerances.equivariance", tolerances.equivariance}, {"tolerances.interval", tolerances.interval},
      {"tolerances.stretch", tolerances.stretch},         {"tolerances.mc_sigmas", tolerances.mc_sigmas}};
  for (const auto& [key, v] : tols) {
    if (!(v > 0.0) || !std::isfinite(v)) bad_key(key, "must be finite and > 0");
  }
}

Config default_config() { return Config{}; }

Config parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::invalid_argument, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::invalid_argument, "config must be a JSON object");
  static const std::set<std::string> known{"algebra", "n",     "k_seq",   "base",    "depth",
                                           "pack_depth", "t_values", "seed", "exclude", "samples",
                                           "witness_iterations", "tolerances"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) bad_key(key, "is not a recognized setting");
  }
  Config c;
  if (j.contains("algebra")) {
    const auto s = get_as<std::string>(j["algebra"], "algebra");
    if (s != "R" && s != "C" && s != "H") bad_key("algebra", "must be \"R\", \"C\" or \"H\", got \"" + s + "\"");
    c.algebra = algebra_from_string(s);
  }
  if (j.contains("n")) c.n = get_int(j["n"], "n");
  if (j.contains("k_seq") && j.contains("base")) bad_key("k_seq", "cannot be combined with 'base'");
  if (j.contains("k_seq")) {
    if (!j["k_seq"].is_array() || j["k_seq"].empty()) bad_key("k_seq", "must be a nonempty list of integers");
    for (const auto& k : j["k_seq"]) c.k_seq.push_back(get_int(k, "k_seq"));
  }
  if (j.contains("base")) c.base = get_int(j["base"], "base");
  if (j.contains("depth")) c.depth = get_int(j["depth"], "depth");
  if (j.contains("pack_depth")) c.pack_depth = get_int(j["pack_depth"], "pack_depth");
  if (j.contains("t_values")) {
    if (!j["t_values"].is_array()) bad_key("t_values", "must be a list of numbers");
    c.t_values.clear();
    for (const auto& t : j["t_values"]) {
      if (!t.is_number()) bad_key("t_values", "must be a list of numbers");
      c.t_values.push_back(t.get<double>());
    }
  }
  if (j.contains("seed")) c.seed = get_count(j["seed"], "seed");
  if (j.contains("exclude")) {
    if (!j["exclude"].is_array()) bad_key("exclude", "must be a list of ball indices");
    for (const auto& e : j["exclude"]) c.exclude.push_back(static_cast<std::size_t>(get_count(e, "exclude")));
  }
  if (j.contains("samples")) c.samples = get_count(j["samples"], "samples");
  if (j.contains("witness_iterations")) c.witness_iterations = get_int(j["witness_iterations"], "witness_iterations");
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) bad_key("tolerances", "must be an object");
    std::pair<const char*, double*> fields[] = {
        {"isometry", &c.tolerances.isometry},         {"involution", &c.tolerances.involution},
        {"equivariance", &c.tolerances.equivariance}, {"interval", &c.tolerances.interval},
        {"stretch", &c.tolerances.stretch},           {"mc_sigmas", &c.tolerances.mc_sigmas}};
    for (const auto& [key, _] : t.items()) {
      bool found = false;
      for (auto& [name, slot] : fields) {
        if (key == name) {
          if (!t[key].is_number()) bad_key("tolerances." + key, "must be a number");
          *slot = t[key].get<double>();
          found = true;
        }
      }
      if (!found) bad_key("tolerances." + key, "is not a recognized tolerance");
    }
  }
  c.validate();
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorCode::io, "error while reading config file '" + path + "'");
  return parse_config(ss.str());
}

std::string canonical_json(const Config& c) {
  ordered_json j;
  j["algebra"] = to_string(c.algebra);
  j["n"] = c.n;
  j["k_seq"] = c.carpet().k_seq;
  j["depth"] = c.depth;
  j["pack_depth"] = c.pack_depth;
  j["t_values"] = c.t_values;
  j["seed"] = c.seed;
  j["exclude"] = c.exclude;
  j["samples"] = c.samples;
  j["witness_iterations"] = c.witness_iterations;
  ordered_json t;
  t["isometry"] = c.tolerances.isometry;
  t["involution"] = c.tolerances.involution;
  t["equivariance"] = c.tolerances.equivariance;
  t["interval"] = c.tolerances.interval;
  t["stretch"] = c.tolerances.stretch;
  t["mc_sigmas"] = c.tolerances.mc_sigmas;
  j["tolerances"] = t;
  return j.dump();
}

std::string config_hash(const Config& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_json(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nilcarpet
