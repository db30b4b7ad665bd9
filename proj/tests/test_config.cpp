#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fcs/config.hpp"
#include "fcs/runner.hpp"

using namespace fcs;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("fcs_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const auto cfg = parse_config(
      R"({"beta":1.0,"kappa":1.0,"lambda_max":0.5,"target_probs":[0.9,0.1],"L":64,"T":100.0})");
  CHECK(cfg.protocol.beta == 1.0);
  CHECK(cfg.L == std::vector<int>{64});
  CHECK(cfg.T == std::vector<double>{100.0});
  CHECK(cfg.engine == Engine::kQuasifree);
  CHECK(cfg.alpha_grid.count == 21);
  CHECK_FALSE(cfg.alpha_grid.imaginary);
}

TEST_CASE("config rejects bad values with key paths") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"target_probs":[0.9,0.2]})"),
                       "config: protocol: probabilities must sum to 1",
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"kappa":-1.0})"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config(R"({"frobnicate":1})"),
                       "config: frobnicate: unknown key", std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config(R"({"alpha_grid":{"step":0.1}})"),
                       "config: alpha_grid.step: unknown key", std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config(R"({"L":"big"})"),
                       "config: L: expected an integer or list thereof",
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_config("not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"engine":"magic"})"), std::invalid_argument);
}

TEST_CASE("canonical text round-trips bit-exactly") {
  const auto cfg = parse_config(
      R"({"beta":0.7,"L":[4,8],"T":[1.5,3.0],"engine":"both","alpha_grid":{"min":0.0,"max":0.7,"count":15,"axis":"real"},"wrong_order":{"L":3,"T":100.0}})");
  const std::string text = cfg.canonical_text();
  CHECK(parse_config(text).canonical_text() == text);
}

TEST_CASE("alpha grid points") {
  AlphaGridSpec g;
  g.min = 0.0;
  g.max = 1.0;
  g.count = 5;
  const auto pts = g.points();
  REQUIRE(pts.size() == 5);
  CHECK(pts[0] == 0.0);
  CHECK(pts[2] == doctest::Approx(0.5));
  CHECK(pts[4] == 1.0);
  g.count = 1;
  CHECK_THROWS_AS(g.points(), std::invalid_argument);
}

TEST_CASE("fcs command with no coupling emits an all-zero CGF column") {
  TempDir dir("idle");
  auto cfg = parse_config(R"({"lambda_max":0.0,"L":6,"T":2.0})");
  RunOptions opts;
  opts.out_dir = dir.path.string();
  const auto files = run_command("fcs", cfg, opts);
  REQUIRE(files.size() == 2);
  std::istringstream csv(slurp(files[0]));
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'a') continue;
    ++rows;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const double chi = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    CHECK(std::abs(chi) <= 1e-10);
  }
  CHECK(rows == 21);
}

TEST_CASE("figure3 emits five curves vanishing at alpha = beta") {
  TempDir dir("fig3");
  ExperimentConfig cfg;
  RunOptions opts;
  opts.out_dir = dir.path.string();
  run_command("figure3", cfg, opts);
  std::istringstream csv(slurp((dir.path / "figure3.csv").string()));
  std::string line;
  bool found_beta_row = false;
  while (std::getline(csv, line)) {
    if (line.rfind("1,", 0) == 0) {  // alpha = beta = 1 row
      found_beta_row = true;
      std::istringstream row(line);
      std::string cell;
      std::getline(row, cell, ',');
      int curves = 0;
      while (std::getline(row, cell, ',')) {
        CHECK(std::abs(std::stod(cell)) <= 1e-12);
        ++curves;
      }
      CHECK(curves == 5);
    }
  }
  CHECK(found_beta_row);
}

TEST_CASE("oracle-check reports tight agreement at L = 4") {
  TempDir dir("oc");
  auto cfg = parse_config(
      R"({"L":4,"T":3.0,"engine":"both","alpha_grid":{"min":0.0,"max":1.0,"count":11,"axis":"real"}})");
  RunOptions opts;
  opts.out_dir = dir.path.string();
  run_command("oracle-check", cfg, opts);
  std::istringstream csv(slurp((dir.path / "oracle_check.csv").string()));
  std::string line, last;
  while (std::getline(csv, line))
    if (!line.empty() && line[0] != '#' && line[0] != 'L') last = line;
  REQUIRE_FALSE(last.empty());
  std::istringstream row(last);
  std::string cell;
  std::getline(row, cell, ',');  // L
  std::getline(row, cell, ',');  // T
  std::getline(row, cell, ',');  // max_abs_dchi
  CHECK(std::stod(cell) <= 1e-8);
}

TEST_CASE("oracle engine refuses oversized chains before allocating") {
  TempDir dir("cap");
  auto cfg = parse_config(R"({"L":20,"T":1.0,"engine":"oracle"})");
  RunOptions opts;
  opts.out_dir = dir.path.string();
  CHECK_THROWS_AS(run_command("fcs", cfg, opts), std::invalid_argument);
  CHECK_FALSE(fs::exists(dir.path / "fcs.csv"));  // no partial output
}

TEST_CASE("identical config gives byte-identical output") {
  TempDir a("det_a"), b("det_b");
  auto cfg = parse_config(R"({"L":[6,8],"T":[2.0,4.0],"alpha_grid":{"min":0.0,"max":1.0,"count":9,"axis":"real"}})");
  RunOptions oa, ob;
  oa.out_dir = a.path.string();
  ob.out_dir = b.path.string();
  oa.workers = 1;
  ob.workers = 3;
  run_command("sweep", cfg, oa);
  run_command("sweep", cfg, ob);
  CHECK(slurp((a.path / "sweep.csv").string()) == slurp((b.path / "sweep.csv").string()));
  CHECK(slurp((a.path / "sweep.json").string()) == slurp((b.path / "sweep.json").string()));
}

TEST_CASE("every output embeds its generating config") {
  TempDir dir("embed");
  ExperimentConfig cfg;
  RunOptions opts;
  opts.out_dir = dir.path.string();
  run_command("atoms", cfg, opts);
  const std::string csv = slurp((dir.path / "atoms.csv").string());
  CHECK(csv.find("# config: " + cfg.canonical_text()) != std::string::npos);
  CHECK(csv.find(kCodeVersion) != std::string::npos);
}

TEST_CASE("unknown command is rejected") {
  ExperimentConfig cfg;
  RunOptions opts;
  opts.out_dir = fs::temp_directory_path().string();
  CHECK_THROWS_AS(run_command("transmogrify", cfg, opts), std::invalid_argument);
}
