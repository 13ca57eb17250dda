#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <ostream>

#include "nilcarpet/error.hpp"
#include "nilcarpet/verify.hpp"

namespace nilcarpet::cli {

namespace {

constexpr int kMaxResolution = 8192;
constexpr std::uint64_t kSweepSamplesPerGenerator = 1000;

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using Rgb = std::array<unsigned char, 3>;
constexpr Rgb kCarpet{40, 40, 40};
constexpr Rgb kRemoved{235, 235, 235};
constexpr Rgb kOutline{30, 90, 200};
constexpr Rgb kExcludedFill{245, 205, 205};
constexpr Rgb kExcludedOutline{210, 40, 40};

// Chart ranges: cube coordinates in [-1/2, 1/2], height in [0, 1].
std::pair<double, double> axis_range(std::size_t axis, int dim) {
  return axis == static_cast<std::size_t>(dim) ? std::pair{0.0, 1.0} : std::pair{-0.5, 0.5};
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument:
    case ErrorCode::algebra_mismatch:
    case ErrorCode::dimension_mismatch:
    case ErrorCode::out_of_range:
      return 1;
    case ErrorCode::io:
      return 3;
    default:
      return 2;
  }
}

Config load(const std::string& path) { return path.empty() ? default_config() : load_config(path); }

}  // namespace

PlaneSpec parse_plane(const std::string& text, int dim) {
  const auto size = static_cast<std::size_t>(dim) + 1;
  PlaneSpec plane;
  plane.fixed.assign(size, std::nullopt);
  std::vector<bool> given(size, false);
  auto bad = [&](const std::string& why) -> void {
    fail(ErrorCode::invalid_argument, "plane '" + text + "': " + why);
  };
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, end - pos);
    pos = end + 1;
    const auto eq = item.find('=');
    if (item.size() < 4 || item[0] != 'x' || eq == std::string::npos) bad("expected xK=value or xK=*");
    std::size_t k = 0;
    try {
      std::size_t used = 0;
      k = std::stoul(item.substr(1, eq - 1), &used);
      if (used != eq - 1) bad("bad coordinate index in '" + item + "'");
    } catch (const std::logic_error&) {
      bad("bad coordinate index in '" + item + "'");
    }
    if (k < 1 || k > size) bad("coordinate x" + std::to_string(k) + " outside x1..x" + std::to_string(size));
    const std::size_t axis = k - 1;
    if (given[axis]) bad("x" + std::to_string(k) + " given twice");
    given[axis] = true;
    const std::string value = item.substr(eq + 1);
    if (value == "*") continue;
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) bad("bad value in '" + item + "'");
    } catch (const std::logic_error&) {
      bad("bad value in '" + item + "'");
    }
    const auto [lo, hi] = axis_range(axis, dim);
    if (!(v >= lo && v <= hi)) bad("x" + std::to_string(k) + " = " + value + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
    plane.fixed[axis] = v;
  }
  const std::size_t u_axis = size - 1;
  if (!given[u_axis]) plane.fixed[u_axis] = 0.0;
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < size; ++i) {
    if (!plane.fixed[i]) free.push_back(i);
  }
  if (free.size() != 2) {
    bad("exactly two coordinates must be free, found " + std::to_string(free.size()));
  }
  plane.free = {free[0], free[1]};
  return plane;
}

std::string render_ppm(const Construction& c, const PlaneSpec& plane, int res) {
  if (res < 1 || res > kMaxResolution) {
    fail(ErrorCode::invalid_argument, "resolution must be in 1.." + std::to_string(kMaxResolution));
  }
  const CarnotShape shape = c.packing.shape;
  const int dim = shape.dim();
  if (plane.fixed.size() != static_cast<std::size_t>(dim) + 1) {
    fail(ErrorCode::dimension_mismatch, "plane does not match the chart dimension");
  }
  const auto n = static_cast<std::size_t>(res);
  const auto [ax, ay] = plane.free;
  const auto [x_lo, x_hi] = axis_range(ax, dim);
  const auto [y_lo, y_hi] = axis_range(ay, dim);
  // Pixel (col, row) samples its center; row 0 is the top.
  auto chart_at = [&](std::size_t col, std::size_t row) {
    std::vector<double> x(plane.fixed.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = plane.fixed[i].value_or(0.0);
    x[ax] = x_lo + (static_cast<double>(col) + 0.5) / static_cast<double>(n) * (x_hi - x_lo);
    x[ay] = y_hi - (static_cast<double>(row) + 0.5) / static_cast<double>(n) * (y_hi - y_lo);
    return x;
  };

  std::vector<Rgb> pixels(n * n, kRemoved);
  parallel_chunks(n, [&](std::size_t row) {
    for (std::size_t col = 0; col < n; ++col) {
      auto x = chart_at(col, row);
      x.pop_back();
      if (contains(c.carpet, x)) pixels[row * n + col] = kCarpet;
    }
  });

  // Ball labels, rasterized over a chart bounding box per ball.
  std::vector<std::int64_t> label(n * n, -1);
  const auto to_index = [&](double v, double lo, double hi) {
    return std::clamp<long>(static_cast<long>(std::floor((v - lo) / (hi - lo) * static_cast<double>(n))), 0,
                            static_cast<long>(n) - 1);
  };
  const auto horizontal = static_cast<std::size_t>(shape.horizontal_dim());
  for (std::size_t b = 0; b < c.packing.balls.size(); ++b) {
    const Ball& ball = c.packing.balls[b].ball;
    auto center = to_chart(HalfSpacePoint::at(ball.center));
    double xi_norm = 0.0;
    for (std::size_t i = 0; i < horizontal; ++i) xi_norm += center[i] * center[i];
    xi_norm = std::sqrt(xi_norm);
    const double r = ball.radius;
    auto half_extent = [&](std::size_t axis) {
      if (axis < horizontal) return 1.05 * r;
      if (axis == static_cast<std::size_t>(dim)) return 1.05 * r * r;
      return 1.05 * (r * r + 2.0 * xi_norm * r);
    };
    auto in_slice = [&](std::size_t axis) {
      if (axis == ax || axis == ay) return true;
      const double v = *plane.fixed[axis];
      return std::abs(v - center[axis]) <= half_extent(axis);
    };
    bool hit = true;
    for (std::size_t i = 0; i < center.size() && hit; ++i) hit = in_slice(i);
    if (!hit) continue;
    const long c0 = to_index(center[ax] - half_extent(ax), x_lo, x_hi);
    const long c1 = to_index(center[ax] + half_extent(ax), x_lo, x_hi);
    // Rows run downward in the vertical coordinate.
    const long r0 = static_cast<long>(n) - 1 - to_index(center[ay] + half_extent(ay), y_lo, y_hi);
    const long r1 = static_cast<long>(n) - 1 - to_index(center[ay] - half_extent(ay), y_lo, y_hi);
    for (long row = std::max(0L, r0); row <= r1; ++row) {
      for (long col = c0; col <= c1; ++col) {
        const auto x = chart_at(static_cast<std::size_t>(col), static_cast<std::size_t>(row));
        if (bisector_side(ball, from_chart(shape, x)) != Side::outside) {
          label[static_cast<std::size_t>(row) * n + static_cast<std::size_t>(col)] = static_cast<std::int64_t>(b);
        }
      }
    }
  }
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t col = 0; col < n; ++col) {
      const std::int64_t l = label[row * n + col];
      if (l < 0) continue;
      const bool excluded = c.packing.balls[static_cast<std::size_t>(l)].excluded;
      const bool edge = row == 0 || col == 0 || row + 1 == n || col + 1 == n || label[(row - 1) * n + col] != l ||
                        label[(row + 1) * n + col] != l || label[row * n + col - 1] != l ||
                        label[row * n + col + 1] != l;
      Rgb& px = pixels[row * n + col];
      if (edge) {
        px = excluded ? kExcludedOutline : kOutline;
      } else if (excluded) {
        px = kExcludedFill;
      }
    }
  }

  std::string out = "P6\n# nilcarpet config_hash=" + config_hash(c.config) + "\n" + std::to_string(n) + " " +
                    std::to_string(n) + "\n255\n";
  const std::size_t header = out.size();
  out.resize(header + 3 * n * n);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    for (std::size_t k = 0; k < 3; ++k) out[header + 3 * i + k] = static_cast<char>(pixels[i][k]);
  }
  return out;
}

std::string sweep_csv(const Construction& c, const std::vector<double>& ts) {
  const auto pair = witness_pair(c.group);
  std::string out = "# nilcarpet sweep config_hash=" + config_hash(c.config) +
                    " seed=" + std::to_string(c.config.seed) + " depth=" + std::to_string(c.carpet.depth) +
                    " pack_depth=" + std::to_string(c.packing.pack_depth);
  if (pair) out += " ball_i=" + std::to_string(pair->first) + " ball_j=" + std::to_string(pair->second);
  out += "\nt,t1,equiv_dev,ell_ij,ell_err\n";
  for (double t : ts) {
    const StretchMap map = StretchMap::from_carpet(c.carpet, t);
    const Deformation d = deform(c.group, map);
    // Seeded by t itself so a row does not depend on its position in the list.
    const auto e = equivariance(c.group, d, kSweepSamplesPerGenerator,
                                substream_seed(c.config.seed, std::bit_cast<std::uint64_t>(t)));
    double ell = std::numeric_limits<double>::quiet_NaN();
    double err = ell;
    if (pair) {
      const auto w = nontriviality_witness(c.group, pair->first, pair->second, t, t, c.config.witness_iterations);
      ell = w.first.length.estimate();
      err = w.first.length.error;
    }
    out += fmt(t) + "," + fmt(map.t1()) + "," + fmt(e.max_deviation) + "," + fmt(ell) + "," + fmt(err) + "\n";
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Carnot-group carpets, ball packings and their deformed Kleinian groups"};
  app.name("nilcarpet");
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string report_path;
  bool force = false;
  std::vector<double> ts;
  std::vector<std::string> suites;
  std::uint64_t seed = 0;
  std::string plane_text;
  int res = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (defaults when omitted)");
    sub->add_flag("--force", force, "replace existing outputs");
  };
  auto* build = app.add_subcommand("build", "construct carpet, packing and group; write artifacts");
  common(build);
  build->add_option("--out", out_path, "output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "tabulate t1, equivariance and witness lengths over t");
  common(sweep);
  sweep->add_option("--t", ts, "comma-separated t values (config t_values when omitted)")->delimiter(',');
  sweep->add_option("--report", report_path, "CSV output path")->required();

  auto* verify = app.add_subcommand("verify", "run property suites");
  common(verify);
  verify->add_option("--suite", suites, "suite name, repeatable, or 'all'")->required();
  auto* seed_opt = verify->add_option("--seed", seed, "seed (config seed when omitted)");
  verify->add_option("--report", report_path, "JSON report path");

  auto* render = app.add_subcommand("render", "P6 raster of a coordinate 2-plane");
  common(render);
  render->add_option("--plane", plane_text, "e.g. x3=0 or x1=*,x2=0,x3=*")->required();
  render->add_option("--res", res, "pixels per side")->required();
  render->add_option("--out", out_path, "P6 output path")->required();

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const Config config = load(config_path);
    if (build->parsed()) {
      namespace fs = std::filesystem;
      const Construction c = construct(config);
      const BuildSummary s = summarize(c);
      std::error_code ec;
      fs::create_directories(out_path, ec);
      if (ec || !fs::is_directory(out_path)) fail(ErrorCode::io, "cannot create output directory '" + out_path + "'");
      const fs::path dir(out_path);
      write_output((dir / "carpet.json").string(), carpet_artifact(config, c.carpet, c.packing.cells), force);
      write_output((dir / "packing.json").string(), packing_artifact(config, c.packing), force);
      write_output((dir / "group.json").string(), group_artifact(config, c.group), force);
      write_output((dir / "summary.json").string(), summary_artifact(config, s), force);
      out << "config_hash " << config_hash(config) << "\n"
          << "measure_exact " << fmt(s.measure_exact) << "\n"
          << "delta1_measure " << fmt(s.delta1_measure) << "\n"
          << "coverage " << fmt(s.coverage.estimate) << " +- " << fmt(s.coverage.std_error) << "\n"
          << "balls " << s.balls << " inversion_generators " << s.inversion_generators << " lattice_generators "
          << s.lattice_generators << " excluded " << s.excluded_balls << "\n";
      return 0;
    }
    if (sweep->parsed()) {
      if (ts.empty()) ts = config.t_values;
      for (double t : ts) {
        if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorCode::invalid_argument, "--t values must be positive");
      }
      const Construction c = construct(config);
      write_output(report_path, sweep_csv(c, ts), force);
      return 0;
    }
    if (verify->parsed()) {
      std::vector<std::string> names;
      for (const auto& s : suites) {
        if (s == "all") {
          names.insert(names.end(), suite_names().begin(), suite_names().end());
        } else {
          names.push_back(s);
        }
      }
      for (const auto& s : names) {
        const auto& known = suite_names();
        if (std::find(known.begin(), known.end(), s) == known.end()) {
          fail(ErrorCode::invalid_argument, "unknown suite '" + s + "'");
        }
      }
      if (!report_path.empty() && !force && std::filesystem::exists(report_path)) {
        fail(ErrorCode::io, "refusing to overwrite existing output '" + report_path + "'");
      }
      const std::uint64_t run_seed = seed_opt->count() ? seed : config.seed;
      std::vector<SuiteReport> reports;
      bool ok = true;
      for (const auto& s : names) {
        reports.push_back(run_suite(s, config, run_seed));
        const auto& r = reports.back();
        ok = ok && r.passed();
        out << (r.passed() ? "PASS " : "FAIL ") << r.suite << " cases=" << r.cases << " failures=" << r.failure_count
            << " max_deviation=" << fmt(r.max_deviation) << "\n";
        for (const auto& f : r.failures) out << "  " << f.check << ": " << f.inputs << " (" << fmt(f.deviation) << ")\n";
      }
      if (!report_path.empty()) write_output(report_path, to_json(reports), force);
      return ok ? 0 : 2;
    }
    if (render->parsed()) {
      if (res < 1 || res > kMaxResolution) {
        fail(ErrorCode::invalid_argument, "--res must be in 1.." + std::to_string(kMaxResolution));
      }
      const PlaneSpec plane = parse_plane(plane_text, config.shape().dim());
      const Construction c = construct(config);
      write_output(out_path, render_ppm(c, plane, res), force);
      return 0;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace nilcarpet::cli
