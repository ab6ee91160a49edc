#include <gtest/gtest.h>
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "irp/generator.hpp"
#include "irp/instance.hpp"
#include "irp/solution_io.hpp"

namespace irp {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run_cli(const std::string& args) {
  const std::string cmd = std::string(IRP_CLI) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) o.out += buf;
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double field(const std::string& text, const std::string& key) {
  const std::regex re(key + " (-?[0-9.]+)");
  std::smatch m;
  if (!std::regex_search(text, m, re)) return std::nan("");
  return std::stod(m[1]);
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("irp-cli-test-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    GeneratorParams gp;
    gp.retailers = 6;
    gp.horizon = 3;
    gp.vehicles = 2;
    gp.seed = 4;
    std::ofstream(dir / "small.json") << serialize_native(generate_instance(gp));
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  fs::path dir;
};

constexpr const char* kQuick = " --max-iters 300 --max-stagnation 200";

TEST_F(CliTest, SolveIsDeterministicAndValidates) {
  const Outcome a = run_cli("solve " + path("small.json") + " --seed 1 -o " + path("a.json") + kQuick);
  const Outcome b = run_cli("solve " + path("small.json") + " --seed 1 -o " + path("b.json") + kQuick);
  ASSERT_EQ(a.code, 0) << a.out;
  ASSERT_EQ(b.code, 0) << b.out;
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
  EXPECT_NE(a.out.find("feasible"), std::string::npos);

  const Outcome v = run_cli("validate " + path("small.json") + " " + path("a.json"));
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_NEAR(field(v.out, "total"), field(a.out, "total"), 1e-2);  // summary prints 2 decimals
  const Instance inst = load_instance(dir / "small.json", InstanceFormat::kNative);
  const SolutionRecord rec = read_record(slurp(dir / "a.json"));
  const ValidationReport report = validate(inst, rec);
  ASSERT_TRUE(report.cost.has_value());
  EXPECT_NEAR(field(v.out, "total"), report.cost->objective(), 1e-6);
}

TEST_F(CliTest, CorruptedQuantityFailsMaxLevel) {
  ASSERT_EQ(run_cli("solve " + path("small.json") + " -o " + path("s.json") + kQuick).code, 0);
  const Instance inst = load_instance(dir / "small.json", InstanceFormat::kNative);
  SolutionRecord rec = read_record(slurp(dir / "s.json"));
  bool changed = false;
  for (auto& day : rec.days) {
    for (auto& route : day) {
      if (!changed && !route.deliveries.empty()) {
        route.deliveries[0].second = inst.retailer(route.deliveries[0].first).max_level + 1;
        changed = true;
      }
    }
  }
  ASSERT_TRUE(changed);
  std::ofstream(dir / "bad.json") << write_record(rec);
  const Outcome v = run_cli("validate " + path("small.json") + " " + path("bad.json"));
  EXPECT_NE(v.code, 0);
  EXPECT_NE(v.out.find("FAIL max-level"), std::string::npos) << v.out;
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run_cli("solve").code, 1);
  EXPECT_EQ(run_cli("solve " + path("small.json") + " --bogus").code, 1);
  EXPECT_EQ(run_cli("solve " + path("missing.dat")).code, 2);
  std::ofstream(dir / "broken.dat") << "3 2\n";
  EXPECT_EQ(run_cli("solve " + path("broken.dat")).code, 2);
  std::ofstream(dir / "junk.json") << "{ not json";
  EXPECT_EQ(run_cli("validate " + path("small.json") + " " + path("junk.json")).code, 2);

  // One retailer whose demand exceeds its storage: no stock-out-free plan.
  std::ofstream(dir / "tight.dat") << "2 2 10\n0 0 0 100 50 0.1\n1 5 5 0 3 0 5 0.2\n";
  const Outcome r = run_cli("solve " + path("tight.dat") + kQuick);
  EXPECT_EQ(r.code, 3) << r.out;
  EXPECT_NE(r.out.find("NO FEASIBLE SOLUTION"), std::string::npos);
}

TEST_F(CliTest, LargeRhoAvoidsStockouts) {
  const Outcome r = run_cli("solve " + path("small.json") + " --rho 1000000" + kQuick);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(field(r.out, "stockout_qty"), 0.0);
}

TEST_F(CliTest, RhoSweepWritesOneRowPerValue) {
  const Outcome r = run_cli("rho-sweep " + path("small.json") + " --rhos 50,100,300,1000000 --csv " + path("rho.csv") + kQuick);
  ASSERT_EQ(r.code, 0) << r.out;
  std::istringstream csv(slurp(dir / "rho.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "rho,feasible,total_cost,routing_cost,inventory_cost,stockout_quantity,delivered_quantity");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST_F(CliTest, TimeLimitIsHonoured) {
  ASSERT_EQ(run_cli("generate --n 50 --horizon 6 --vehicles 3 -o " + path("big.json")).code, 0);
  const auto start = std::chrono::steady_clock::now();
  const Outcome r = run_cli("solve " + path("big.json") + " --time-limit 1");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_LT(secs, 4.0);
}

TEST_F(CliTest, InstrumentPieces) {
  const Outcome r = run_cli("solve " + path("small.json") + " --instrument-pieces --pieces-csv " + path("p.csv") + kQuick);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("day,samples,median,p90,max"), std::string::npos);
  std::istringstream csv(slurp(dir / "p.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "day,retailer,pieces,max_level");
  EXPECT_TRUE(static_cast<bool>(std::getline(csv, line)));
}

TEST_F(CliTest, BenchAndReportOnly) {
  std::ofstream(dir / "m.csv") << "instance,bks,n,horizon,cost_class,vehicles\nsmall.json,5000,6,3,LC,2\n";
  const std::string common = "bench " + path("m.csv") + " --runs 2 --out-dir " + path("out") + kQuick;
  const Outcome a = run_cli(common);
  ASSERT_EQ(a.code, 0) << a.out;
  const std::string first = slurp(dir / "out" / "report.csv");
  const Outcome b = run_cli(common + " --report-only");
  ASSERT_EQ(b.code, 0) << b.out;
  EXPECT_EQ(slurp(dir / "out" / "report.csv"), first);
  EXPECT_NE(first.find("\ngen-n6-H3-LC-K2-s4,6,3,LC,2,5000.00,2,2,"), std::string::npos) << first;
}

}  // namespace
}  // namespace irp
