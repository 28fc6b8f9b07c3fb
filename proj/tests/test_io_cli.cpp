#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ofifs/cli.hpp"
#include "ofifs/error.hpp"
#include "ofifs/io.hpp"
#include "support.hpp"

using namespace ofifs;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path config_path(const std::string& name) {
  return fs::path(OFIFS_FIXTURE_DIR) / ".." / ".." / "configs" / name;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("ofifs-test-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

json finite_doc() {
  return json::parse(R"({
    "space": {"kind": "finite", "labels": ["a", "b", "c"], "coordinates": [[0, 0], [4, 0], [6, 0]]},
    "maps": [{"table": ["b", "c", "c"]}],
    "greys": [{"kind": "table", "table": [0, 0, 4, 4, 4]}],
    "quantization": 4,
    "orbital_factor": 0.5,
    "seed": [{"kind": "delta", "at": "a"}]
  })");
}

}  // namespace

TEST(Config, GridConfigParses) {
  const io::RunConfig cfg = io::load_config(config_path("sierpinski.json"));
  EXPECT_FALSE(cfg.space->is_finite());
  EXPECT_EQ(cfg.space->size(), 129u * 129u);
  EXPECT_EQ(cfg.system.ifs().map_count(), 3u);
  EXPECT_LT(cfg.system.ifs().orbital_factor(), 0.52);
  EXPECT_EQ(cfg.initial.quantization(), 255);
  EXPECT_EQ(cfg.initial.positive_points().size(), 9u);
  EXPECT_EQ(cfg.initial.level(cfg.space->grid_point(64, 64)), 255);
}

TEST(Config, FiniteMetricEncodingsAgree) {
  json coords = finite_doc();
  json lower = finite_doc();
  lower["space"].erase("coordinates");
  lower["space"]["lower_triangular"] = {json::array(), {4}, {6, 2}};
  json full = finite_doc();
  full["space"].erase("coordinates");
  full["space"]["distances"] = {{0, 4, 6}, {4, 0, 2}, {6, 2, 0}};
  const auto a = io::parse_config(coords);
  const auto b = io::parse_config(lower);
  const auto c = io::parse_config(full);
  for (PointId p = 0; p < 3; ++p) {
    for (PointId q = 0; q < 3; ++q) {
      EXPECT_DOUBLE_EQ(a.space->distance(p, q), b.space->distance(p, q));
      EXPECT_DOUBLE_EQ(a.space->distance(p, q), c.space->distance(p, q));
    }
  }
  EXPECT_EQ(a.initial.level(0), 4);
}

TEST(Config, MalformedInputIsAConfigError) {
  json missing = finite_doc();
  missing.erase("maps");
  EXPECT_THROW(io::parse_config(missing), ConfigError);

  json bad_grey = finite_doc();
  bad_grey["greys"][0] = {{"kind", "sigmoid"}};
  EXPECT_THROW(io::parse_config(bad_grey), ConfigError);

  json bad_point = finite_doc();
  bad_point["seed"][0]["at"] = "z";
  EXPECT_ANY_THROW(io::parse_config(bad_point));

  json not_normal = finite_doc();
  not_normal["seed"] = json::array();
  EXPECT_ANY_THROW(io::parse_config(not_normal));

  TempDir dir;
  std::ofstream(dir / "broken.json") << "{ not json";
  EXPECT_THROW(io::load_config(dir / "broken.json"), ConfigError);
}

TEST(Config, UncertifiedFactorIsRejected) {
  json doc = finite_doc();
  doc["orbital_factor"] = 0.1;
  EXPECT_THROW(io::parse_config(doc), InvalidArgument);
}

TEST(Image, PgmRoundTripAndOrientation) {
  auto g = Space::grid(Eigen::Vector2d::Zero(), 1.0, 5, 3);
  LevelArray levels = LevelArray::Zero(15);
  levels[g->grid_point(0, 0)] = 255;
  levels[g->grid_point(4, 2)] = 128;
  const FuzzySet u(g, 255, levels);
  const io::GreyImage img = io::render(u);
  ASSERT_EQ(img.width, 5);
  ASSERT_EQ(img.height, 3);
  EXPECT_EQ(img.pixels[2 * 5 + 0], 255);  // bottom-left
  EXPECT_EQ(img.pixels[0 * 5 + 4], 128);  // top-right

  TempDir dir;
  io::write_pgm(dir / "u.pgm", img);
  const io::GreyImage back = io::read_pgm(dir / "u.pgm");
  EXPECT_EQ(back.pixels, img.pixels);
  EXPECT_EQ(io::from_image(g, back), u);
}

TEST(Image, CoarseQuantizationRounds) {
  auto g = Space::grid(Eigen::Vector2d::Zero(), 1.0, 4, 1);
  LevelArray levels(4);
  levels << 0, 1, 2, 4;
  const io::GreyImage img = io::render(FuzzySet(g, 4, levels));
  EXPECT_EQ(img.pixels, (std::vector<std::uint8_t>{0, 64, 128, 255}));
}

TEST(Cli, RenderIsDeterministicAndMatchesTheEngine) {
  TempDir dir;
  const std::string cfg = config_path("two_seeds.json").string();
  ASSERT_EQ(cli_run({"render", "--config", cfg, "--out", (dir / "a.pgm").string()}).code, 0);
  ASSERT_EQ(cli_run({"render", "--config", cfg, "--out", (dir / "b.pgm").string()}).code, 0);
  EXPECT_EQ(slurp(dir / "a.pgm"), slurp(dir / "b.pgm"));

  const json report = io::read_json(dir / "a.pgm.json");
  EXPECT_EQ(report.at("convergence").at("terminal"), "ExactFixedPoint");
  EXPECT_TRUE(report.at("orbital").at("passed").get<bool>());

  const io::RunConfig rc = io::load_config(cfg);
  const FuzzySet limit = picard_limit(rc.system, rc.initial).limit;
  EXPECT_EQ(io::from_image(rc.space, io::read_pgm(dir / "a.pgm")), limit);
}

TEST(Cli, RenderExitCodes) {
  TempDir dir;
  const std::string out = (dir / "x.pgm").string();
  EXPECT_EQ(cli_run({"render", "--config", config_path("two_orbits.json").string(), "--out", out}).code,
            cli::kExitUsage);
  EXPECT_EQ(cli_run({"render", "--config", (dir / "missing.json").string(), "--out", out}).code,
            cli::kExitUsage);
  EXPECT_EQ(cli_run({"render", "--out", out}).code, cli::kExitUsage);
  EXPECT_EQ(cli_run({"bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(cli_run({"render", "--config", config_path("sierpinski.json").string(), "--out", out,
                     "--budget", "1"})
                .code,
            cli::kExitFailure);
  EXPECT_EQ(cli_run({"--help"}).code, cli::kExitOk);
}

TEST(Cli, VerifyFixturesAndCorruption) {
  const std::string good = ofifs::testing::fixture_path("two_orbits.json");
  const CliResult ok = cli_run({"verify", "--fixture", good});
  EXPECT_EQ(ok.code, cli::kExitOk) << ok.out << ok.err;
  EXPECT_NE(ok.out.find("PASS"), std::string::npos);

  TempDir dir;
  json doc = io::read_json(good);
  doc["limit"][2] = 3;
  io::write_json(dir / "corrupt.json", doc);
  const CliResult bad = cli_run({"verify", "--fixture", (dir / "corrupt.json").string()});
  EXPECT_EQ(bad.code, cli::kExitFailure);
  EXPECT_NE(bad.out.find("FAIL"), std::string::npos);
}

TEST(Cli, VerifySuiteSingleInstanceAndReport) {
  TempDir dir;
  const CliResult r = cli_run({"verify", "--count", "4", "--instance", "s1-2", "--no-grids", "--report",
                              (dir / "r.json").string()});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  const json report = io::read_json(dir / "r.json");
  ASSERT_EQ(report.at("instances").size(), 1u);
  EXPECT_EQ(report.at("instances")[0].at("id"), "s1-2");
  EXPECT_EQ(cli_run({"verify", "--count", "4", "--instance", "nope", "--no-grids"}).code,
            cli::kExitUsage);
}

TEST(Cli, DecomposeWritesPartsAndReport) {
  TempDir dir;
  const CliResult r = cli_run({"decompose", "--config", config_path("two_seeds.json").string(), "--out",
                              (dir / "d").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  for (const char* f : {"part_0.pgm", "part_1.pgm", "whole.pgm", "envelope.pgm", "report.json"}) {
    EXPECT_TRUE(fs::exists(dir / "d" / f)) << f;
  }
  EXPECT_EQ(slurp(dir / "d" / "whole.pgm"), slurp(dir / "d" / "envelope.pgm"));
  EXPECT_EQ(io::read_json(dir / "d" / "report.json").at("status"), "pass");

  const CliResult fin = cli_run({"decompose", "--config", config_path("two_orbits.json").string(), "--out",
                           (dir / "f").string()});
  ASSERT_EQ(fin.code, cli::kExitOk) << fin.err;
  const json rep = io::read_json(dir / "f" / "report.json");
  EXPECT_EQ(rep.at("whole"), rep.at("envelope"));
  EXPECT_EQ(rep.at("parts").size(), 2u);
}

TEST(Cli, FixturesCommandWritesLoadableFiles) {
  TempDir dir;
  const CliResult r = cli_run({"fixtures", "--out", (dir / "fx").string(), "--count", "2", "--seed", "4"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(dir / "fx")) {
    const io::Fixture fx = io::fixture_from_json(io::read_json(entry.path()));
    EXPECT_EQ(oracle::oracle_fixed_points(fx.instance).limit, fx.limit);
    ++n;
  }
  EXPECT_EQ(n, 2u);
}

TEST(Cli, CertifyReportsTheWitnessForExpandingMaps) {
  TempDir dir;
  json doc = finite_doc();
  doc["maps"][0]["table"] = {"a", "c", "b"};
  doc.erase("orbital_factor");
  io::write_json(dir / "bad.json", doc);
  const CliResult r = cli_run({"certify", "--config", (dir / "bad.json").string()});
  EXPECT_NE(r.code, cli::kExitOk);
}
