#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "odmts/report.hpp"
#include "odmts/runner.hpp"
#include "random_instances.hpp"

using namespace odmts;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(ODMTS_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("odmts_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST(Report, FormatNumberRoundTrips) {
  for (double v : {0.1, 17.75, 1e-300, 123.71616, -2.5}) EXPECT_EQ(std::stod(format_number(v)), v);
  EXPECT_EQ(format_number(44.0), "44");
}

TEST(Report, DesignRoundTrip) {
  const Instance inst(testkit::routing_example_data());
  Design z(inst.arc_count());
  z.set(0, true);
  z.set(1, true);
  const std::string text = design_json(inst, z);
  EXPECT_EQ(parse_design(inst, text), z);
  EXPECT_NE(text.find("\"fingerprint\": \"1>2|2>1\""), std::string::npos);
  EXPECT_THROW(parse_design(inst, "{\"open_arcs\": [[0, 3]]}"), ValidationError);
  EXPECT_THROW(parse_design(inst, "nope"), ParseError);
}

TEST(Report, TraceCsvShape) {
  const Instance inst(testkit::routing_example_data());
  RunConfig cfg;
  cfg.algorithm = Algorithm::arc_s1;
  const RunOutput out = run_algorithm(inst, cfg);
  const std::string csv = trace_csv(out.trace, "arc-s1");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, std::string("# tool_version=") + kToolVersion + " algorithm=arc-s1");
  std::getline(in, line);
  EXPECT_EQ(line, kTraceColumns);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 12);
  }
  EXPECT_EQ(rows, out.trace.size());
  EXPECT_EQ(timing_csv(out.trace).substr(0, 12), "row,wall_ms\n");
}

TEST(Report, EvaluationJsonCarriesTripSet) {
  const Instance inst(testkit::routing_example_data());
  const DesignEvaluation ev = eval_design(inst, Design(2), {0});
  const std::string text = evaluation_json(inst, ev, {0});
  EXPECT_EQ(parse_t_hat(inst, text), (TripSet{0}));
  EXPECT_NE(text.find("\"objective\": 18.5"), std::string::npos);
}

TEST(Runner, ParseAlgorithm) {
  for (Algorithm a : all_algorithms()) EXPECT_EQ(parse_algorithm(algorithm_id(a)), a);
  EXPECT_THROW(parse_algorithm("simplex"), std::invalid_argument);
}

TEST_F(CliTest, GenerateIsDeterministic) {
  const std::string args = "generate --stops 30 --hubs 4 --core 10 --latent 20 --seed 7 -o ";
  ASSERT_EQ(run_cli(args + (dir_ / "a.json").string(), dir_ / "a.log"), 0);
  ASSERT_EQ(run_cli(args + (dir_ / "b.json").string(), dir_ / "b.log"), 0);
  EXPECT_EQ(slurp(dir_ / "a.json"), slurp(dir_ / "b.json"));
  const std::string log = slurp(dir_ / "a.log");
  EXPECT_NE(log.find("sha256 "), std::string::npos);
  EXPECT_NE(log.find("stops 30 hubs 4"), std::string::npos);
  EXPECT_NE(log.find("trips 30 latent 20"), std::string::npos);
  EXPECT_EQ(slurp(dir_ / "a.log").substr(log.find("sha256")), slurp(dir_ / "b.log").substr(log.find("sha256")));
}

TEST_F(CliTest, GenerateRejectsTooManyHubs) {
  EXPECT_EQ(run_cli("generate --stops 3 --hubs 5 -o " + (dir_ / "x.json").string(), dir_ / "x.log"), 1);
  EXPECT_FALSE(slurp(dir_ / "x.log").empty());
}

TEST_F(CliTest, SolveWritesBundle) {
  const fs::path inst = dir_ / "i.json";
  ASSERT_EQ(run_cli("generate --stops 20 --hubs 3 --core 6 --latent 10 --seed 2 -o " + inst.string(), dir_ / "g.log"),
            0);
  const fs::path out = dir_ / "grad";
  ASSERT_EQ(run_cli("solve " + inst.string() + " --alg grad --rho 2 -o " + out.string(), dir_ / "s.log"), 0);
  for (const char* f : {"design.json", "evaluation.json", "trace.csv", "timing.csv"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_NE(slurp(dir_ / "s.log").find("objective "), std::string::npos);

  // evaluate reproduces the objective
  ASSERT_EQ(run_cli("evaluate " + inst.string() + " " + (out / "design.json").string() + " -o " +
                        (dir_ / "ev.json").string(),
                    dir_ / "e.log"),
            0);
  EXPECT_EQ(slurp(dir_ / "ev.json"), slurp(out / "evaluation.json"));

  const fs::path arc = dir_ / "arc";
  ASSERT_EQ(run_cli("solve " + inst.string() + " --alg arc-s2 --rules d,a -o " + arc.string(), dir_ / "a.log"), 0);
  const std::string trace = slurp(arc / "trace.csv");
  EXPECT_NE(trace.find("arc-s2,init,"), std::string::npos);
  // on this instance stage 1 accepts nothing; stage 2 does
  EXPECT_NE(trace.find("arc-s2,s2,"), std::string::npos);

  EXPECT_EQ(run_cli("solve " + inst.string() + " --alg arc-s2 --rules a,a -o " + arc.string(), dir_ / "b.log"), 1);
  EXPECT_EQ(run_cli("solve " + inst.string() + " --alg nope", dir_ / "c.log"), 1);
  EXPECT_EQ(run_cli("solve " + (dir_ / "missing.json").string(), dir_ / "d.log"), 1);
}

TEST_F(CliTest, Compare) {
  const fs::path inst = dir_ / "i.json";
  ASSERT_EQ(run_cli("generate --stops 12 --hubs 3 --core 4 --latent 6 --seed 4 -o " + inst.string(), dir_ / "g.log"),
            0);
  const fs::path csv = dir_ / "cmp.csv";
  ASSERT_EQ(run_cli("compare --instances " + inst.string() + " --algs exact,grad -o " + csv.string(), dir_ / "c.log"),
            0);
  std::istringstream in(slurp(csv));
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].rfind("# tool_version=", 0), 0u);
  EXPECT_NE(rows[2].find(",exact,ok,"), std::string::npos);
  // exact row: objective equals best_known and the gap is zero
  std::vector<std::string> cells;
  std::stringstream ss(rows[2]);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  EXPECT_EQ(cells[3], cells[4]);
  EXPECT_EQ(cells[5], "0");
  EXPECT_TRUE(fs::exists(dir_ / "cmp.timing.csv"));

  EXPECT_EQ(run_cli("compare --instances " + inst.string() + " -o " + csv.string(), dir_ / "e.log"), 1);
}
