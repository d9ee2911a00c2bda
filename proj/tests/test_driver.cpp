#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dkc/driver.hpp"

namespace dkc {
namespace {

TEST(Config, ParseExtentsAndBoundary) {
  EXPECT_EQ(parse_extents("3,2,1,4"), (std::array<int, 4>{3, 2, 1, 4}));
  EXPECT_THROW(parse_extents("3,2,1"), UsageError);
  EXPECT_THROW(parse_extents("3,2,1,1,1"), UsageError);
  EXPECT_THROW(parse_extents("3,x,1,1"), UsageError);
  EXPECT_EQ(parse_boundary("ghost"), BoundaryMode::ghost);
  EXPECT_THROW(parse_boundary("open"), UsageError);
}

TEST(Config, JsonFieldsApplied) {
  RunConfig cfg;
  apply_json(cfg, nlohmann::json::parse(R"({"lattice":[2,2,1,1],"boundary":"ghost","mass":0.5,
                                             "masses":[1.5],"seed":7,"tol":1e-10,"trials":3})"));
  EXPECT_EQ(cfg.lattice, (std::array<int, 4>{2, 2, 1, 1}));
  EXPECT_EQ(cfg.boundary, BoundaryMode::ghost);
  EXPECT_EQ(cfg.mass, 0.5);
  EXPECT_EQ(cfg.certification_masses(), std::vector<double>{0.5});
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.tol, 1e-10);
  EXPECT_EQ(cfg.trials, 3);
}

TEST(Config, RejectsUnknownAndInvalid) {
  RunConfig cfg;
  EXPECT_THROW(apply_json(cfg, nlohmann::json::parse(R"({"latice":[2,2,2,2]})")), UsageError);
  EXPECT_THROW(apply_json(cfg, nlohmann::json::parse(R"({"lattice":"2,2,2,2"})")), UsageError);
  EXPECT_THROW(apply_json(cfg, nlohmann::json::parse("[1,2]")), UsageError);
  RunConfig bad;
  bad.lattice = {2, 0, 2, 2};
  EXPECT_THROW(bad.validate(), UsageError);
  bad = RunConfig{};
  bad.tol = 0.0;
  EXPECT_THROW(bad.validate(), UsageError);
  EXPECT_THROW(cmd_verify(bad), UsageError);
  bad = RunConfig{};
  bad.mass = -1.0;
  EXPECT_THROW(bad.validate(), UsageError);
  EXPECT_THROW(load_config_file("/nonexistent/dkc.json"), UsageError);
}

TEST(Config, LoadsFile) {
  const auto path = std::filesystem::temp_directory_path() / "dkc_test_config.json";
  {
    std::ofstream os(path);
    os << R"({"lattice":[1,1,1,1],"seed":9})";
  }
  const RunConfig cfg = load_config_file(path.string());
  EXPECT_EQ(cfg.lattice, (std::array<int, 4>{1, 1, 1, 1}));
  EXPECT_EQ(cfg.seed, 9u);
  {
    std::ofstream os(path);
    os << "{not json";
  }
  EXPECT_THROW(load_config_file(path.string()), UsageError);
  std::filesystem::remove(path);
}

TEST(Report, ComparisonsAndOrdering) {
  Report r("test");
  r.record("b.second", "", 1e-13, 1e-12);
  r.record("a.first", "", 2.0, 1e-8, Comparison::greater_than);
  r.record("c.third", "", std::nan(""), 1.0);
  r.record("d.fourth", "", 1e-11, 1e-12);
  EXPECT_EQ(r.passed(), 2u);
  EXPECT_FALSE(r.all_passed());
  const auto j = r.to_json();
  EXPECT_EQ(j["checks"][0]["id"], "a.first");
  EXPECT_EQ(j["checks"][0]["comparison"], ">");
  EXPECT_EQ(j["checks"][2]["status"], "fail");
  EXPECT_EQ(j["summary"]["failed"], 2);
  EXPECT_FALSE(strip_runtime(j)["checks"][0].contains("runtime_ms"));
}

TEST(Verify, SmallLatticeAllPass) {
  RunConfig cfg;
  cfg.lattice = {2, 1, 2, 1};
  cfg.trials = 2;
  const Report r = cmd_verify(cfg);
  for (const auto& rec : r.records()) EXPECT_TRUE(rec.passed) << rec.id << " " << rec.measured;
  EXPECT_GE(r.records().size(), 20u);
}

TEST(Verify, DegenerateLatticeAllPass) {
  RunConfig cfg;
  cfg.lattice = {1, 1, 1, 1};
  cfg.trials = 2;
  const Report r = cmd_verify(cfg);
  EXPECT_TRUE(r.all_passed());
}

TEST(Verify, DeterministicModuloRuntime) {
  RunConfig cfg;
  cfg.lattice = {2, 2, 1, 1};
  cfg.trials = 2;
  const auto a = strip_runtime(cmd_verify(cfg).to_json()).dump();
  const auto b = strip_runtime(cmd_verify(cfg).to_json()).dump();
  EXPECT_EQ(a, b);
  cfg.seed = 43;
  EXPECT_NE(a, strip_runtime(cmd_verify(cfg).to_json()).dump());
}

TEST(Spectrum, DegenerateLatticeAllZero) {
  RunConfig cfg;
  cfg.lattice = {1, 1, 1, 1};
  std::vector<complex> ev;
  const Report r = cmd_spectrum(cfg, &ev);
  EXPECT_TRUE(r.all_passed());
  ASSERT_EQ(ev.size(), 16u);
  for (complex v : ev) EXPECT_EQ(v, complex(0.0));
  std::ostringstream os;
  write_spectrum_csv(os, ev);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "index,re,im");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 16);
}

TEST(Spectrum, RefusesGhostAndOversize) {
  RunConfig cfg;
  cfg.boundary = BoundaryMode::ghost;
  EXPECT_THROW(cmd_spectrum(cfg), UsageError);
  cfg = RunConfig{};
  cfg.lattice = {4, 3, 3, 3};
  EXPECT_THROW(cmd_spectrum(cfg), UsageError);
}

TEST(Spectrum, CsvPathDefaults) {
  RunConfig cfg;
  EXPECT_EQ(default_csv_path(cfg), "spectrum.csv");
  cfg.out = "out/run.json";
  EXPECT_EQ(default_csv_path(cfg), "out/run.csv");
  cfg.out = "a.b/report";
  EXPECT_EQ(default_csv_path(cfg), "a.b/report.csv");
  cfg.csv = "x.csv";
  EXPECT_EQ(default_csv_path(cfg), "x.csv");
}

TEST(Chirality, DegenerateLattice) {
  RunConfig cfg;
  cfg.lattice = {1, 1, 1, 1};
  const Report r = cmd_chirality(cfg);
  EXPECT_TRUE(r.all_passed());
  const auto j = r.to_json();
  EXPECT_EQ(j["kernel_dimension"], 16);
  EXPECT_TRUE(j["eigenpairs"].empty());
  cfg.mass = 0.0;
  EXPECT_THROW(cmd_chirality(cfg), UsageError);
}

}  // namespace
}  // namespace dkc
