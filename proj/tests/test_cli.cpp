#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "nilcarpet/error.hpp"

using namespace nilcarpet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "nilcarpet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("nilcarpet_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_config(const fs::path& dir, const std::string& text) {
  const auto path = dir / "config.json";
  std::ofstream(path) << text;
  return path.string();
}

std::string slurp(const fs::path& p) {
  std::stringstream s;
  s << std::ifstream(p, std::ios::binary).rdbuf();
  return s.str();
}

// Header fields of a binary P6 image, then the pixel bytes.
struct Ppm {
  std::string comment;
  int width = 0, height = 0;
  std::string pixels;
};

Ppm parse_ppm(const std::string& bytes) {
  std::istringstream in(bytes);
  Ppm p;
  std::string magic;
  std::getline(in, magic);
  EXPECT_EQ(magic, "P6");
  std::getline(in, p.comment);
  int maxval = 0;
  in >> p.width >> p.height >> maxval;
  in.get();
  EXPECT_EQ(maxval, 255);
  p.pixels.assign(std::istreambuf_iterator<char>(in), {});
  return p;
}

const std::string kSmall = R"({"depth":2,"pack_depth":1,"samples":2000,"t_values":[1,2]})";

}  // namespace

TEST(Cli, PlaneParsing) {
  const auto p = cli::parse_plane("x1=*,x2=*", 2);
  EXPECT_EQ(p.free, (std::array<std::size_t, 2>{0, 1}));
  EXPECT_EQ(p.fixed[2], 0.0);

  EXPECT_EQ(cli::parse_plane("x3=0", 2).free, (std::array<std::size_t, 2>{0, 1}));
  const auto q = cli::parse_plane("x1=*,x2=0.1,x3=*,x4=0.5", 3);
  EXPECT_EQ(q.free, (std::array<std::size_t, 2>{0, 2}));
  EXPECT_EQ(q.fixed[1], 0.1);
  EXPECT_EQ(q.fixed[3], 0.5);

  for (const char* bad : {"x1=*,x2=0", "x1=*,x2=*,x3=*", "x9=*,x1=*", "y1=*,x2=*", "x1=*,x2=abc", "x1=*,x1=*",
                          "x1=*,x2=*,x3=-1", "x1=0.9,x2=*,x3=*"}) {
    try {
      cli::parse_plane(bad, 2);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::invalid_argument) << bad;
    }
  }
}

TEST(Cli, RenderHeaderAndCarpetFraction) {
  const auto c = construct(parse_config(R"({"depth":2,"pack_depth":1})"));
  const auto img = parse_ppm(cli::render_ppm(c, cli::parse_plane("x1=*,x2=*", 2), 512));
  EXPECT_EQ(img.width, 512);
  EXPECT_EQ(img.height, 512);
  EXPECT_EQ(img.comment, "# nilcarpet config_hash=" + config_hash(c.config));
  ASSERT_EQ(img.pixels.size(), 512u * 512u * 3u);

  const int res = 1024;
  const auto big = parse_ppm(cli::render_ppm(c, cli::parse_plane("x1=*,x2=*", 2), res));
  std::size_t dark = 0;
  for (std::size_t i = 0; i + 2 < big.pixels.size(); i += 3) {
    if (big.pixels[i] == 40 && big.pixels[i + 1] == 40 && big.pixels[i + 2] == 40) ++dark;
  }
  const double fraction = static_cast<double>(dark) / (res * res);
  EXPECT_NEAR(fraction, measure_exact(c.carpet), 0.02);

  EXPECT_THROW(cli::render_ppm(c, cli::parse_plane("x1=*,x2=*", 2), 0), Error);
}

TEST(Cli, SweepRows) {
  const auto c = construct(parse_config(kSmall));
  const auto csv = cli::sweep_csv(c, {1.0, 2.0});
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("# nilcarpet sweep config_hash=" + config_hash(c.config), 0), 0u);
  std::getline(in, line);
  EXPECT_EQ(line, "t,t1,equiv_dev,ell_ij,ell_err");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) row.push_back(std::stod(f));
    rows.push_back(row);
  }
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][1], 1.0);
  EXPECT_GT(rows[1][1], rows[0][1]);
  EXPECT_LE(rows[1][2], 1e-9);
  EXPECT_EQ(csv, cli::sweep_csv(c, {1.0, 2.0}));
}

TEST(Cli, BuildWritesArtifactsOnceAndIsDeterministic) {
  const auto dir = scratch_dir("build");
  const auto cfg = write_config(dir, kSmall);
  const auto a = run_cli({"build", "--config", cfg, "--out", (dir / "a").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto b = run_cli({"build", "--config", cfg, "--out", (dir / "b").string()});
  ASSERT_EQ(b.code, 0) << b.err;
  for (const char* f : {"carpet.json", "packing.json", "group.json", "summary.json"}) {
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run_cli({"build", "--config", cfg, "--out", (dir / "a").string()}).code, 3);
  EXPECT_EQ(run_cli({"build", "--config", cfg, "--out", (dir / "a").string(), "--force"}).code, 0);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir("exit");
  const auto bad = write_config(dir, R"({"k_seq":[3,4],"depth":2})");
  const auto r = run_cli({"build", "--config", bad, "--out", (dir / "o").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("k_seq"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir / "o"));

  const auto good = write_config(dir, kSmall);
  EXPECT_EQ(run_cli({"build", "--config", good, "--out", "/proc/nilcarpet/nope"}).code, 3);
  EXPECT_EQ(run_cli({"build", "--config", (dir / "missing.json").string(), "--out", (dir / "o").string()}).code,
            3);
  EXPECT_EQ(run_cli({"verify", "--config", good, "--suite", "bogus"}).code, 1);
  EXPECT_EQ(run_cli({"render", "--config", good, "--plane", "x1=*,x2=0", "--res", "16", "--out",
                     (dir / "p.ppm").string()})
                .code,
            1);
  EXPECT_EQ(run_cli({"sweep", "--config", good, "--t", "1,-2", "--report", (dir / "s.csv").string()}).code, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
  EXPECT_EQ(run_cli({}).code, 1);
}

TEST(Cli, VerifyAndRenderVerbs) {
  const auto dir = scratch_dir("verbs");
  const auto cfg = write_config(dir, kSmall);
  const auto v = run_cli({"verify", "--config", cfg, "--suite", "carnot_isometry", "--report",
                          (dir / "r.json").string()});
  EXPECT_EQ(v.code, 0) << v.err;
  EXPECT_NE(v.out.find("PASS"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "r.json"));

  const auto img = run_cli({"render", "--config", cfg, "--plane", "x1=*,x2=*", "--res", "64", "--out",
                            (dir / "p.ppm").string()});
  EXPECT_EQ(img.code, 0) << img.err;
  EXPECT_EQ(parse_ppm(slurp(dir / "p.ppm")).width, 64);
}
