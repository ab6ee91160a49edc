#include "irp/bench.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "irp/generator.hpp"

namespace irp {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("irp-bench-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(Gap, Formula) {
  EXPECT_DOUBLE_EQ(gap_percent(100.0, 100.0), 0.0);
  EXPECT_NEAR(gap_percent(101.0, 100.0), 1.0, 1e-12);
  EXPECT_LT(gap_percent(96.19, 100.0), 0.0);
  EXPECT_NEAR(gap_percent(96.19, 100.0), -3.81, 1e-9);
}

TEST(Manifest, ParsesOptionalColumns) {
  std::istringstream in(
      "instance,bks,n,horizon,cost_class,vehicles\n"
      "# comment\n"
      "a.dat,1234.5,5,3,HC,2\n"
      "b.dat,,,,,\n"
      "/abs/c.json\n");
  const auto m = read_manifest(in, "/data");
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0].instance, fs::path("/data/a.dat"));
  EXPECT_DOUBLE_EQ(*m[0].bks, 1234.5);
  EXPECT_EQ(*m[0].n, 5);
  EXPECT_EQ(m[0].cost_class, "HC");
  EXPECT_EQ(m[0].vehicles, 2);
  EXPECT_FALSE(m[1].bks.has_value());
  EXPECT_EQ(m[1].vehicles, 1);
  EXPECT_EQ(m[2].instance, fs::path("/abs/c.json"));
}

TEST(Manifest, Errors) {
  std::istringstream no_header("a.dat,1\n");
  EXPECT_THROW(read_manifest(no_header), ParseError);
  std::istringstream bad_bks("instance,bks\na.dat,xyz\n");
  try {
    read_manifest(bad_bks);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Summarize, RowsAndGroups) {
  InstanceRow a;
  a.name = "a";
  a.n = 5;
  a.horizon = 3;
  a.cost_class = "HC";
  a.bks = 100.0;
  a.runs = {{1, true, 101.0, 2.0, 10}, {2, true, 103.0, 4.0, 10}, {3, false, 0.0, 3.0, 10}};
  InstanceRow b = a;
  b.name = "b";
  b.bks = 200.0;
  b.runs = {{1, true, 200.0, 1.0, 10}};
  InstanceRow c = a;
  c.name = "c";
  c.bks.reset();
  c.cost_class = "LC";

  const BenchmarkReport r = summarize({a, b, c});
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].feasible_runs, 2);
  EXPECT_DOUBLE_EQ(r.rows[0].best, 101.0);
  EXPECT_DOUBLE_EQ(r.rows[0].average, 102.0);
  EXPECT_DOUBLE_EQ(r.rows[0].seconds, 3.0);
  EXPECT_NEAR(*r.rows[0].gap_best, 1.0, 1e-12);
  EXPECT_NEAR(*r.rows[1].gap_best, 0.0, 1e-12);
  EXPECT_FALSE(r.rows[2].gap_best.has_value());

  ASSERT_EQ(r.groups.size(), 2u);
  const GroupRow& hc = r.groups[0].cost_class == "HC" ? r.groups[0] : r.groups[1];
  EXPECT_EQ(hc.instances, 2);
  EXPECT_DOUBLE_EQ(hc.best, (101.0 + 200.0) / 2);
  EXPECT_NEAR(*hc.gap_best, 0.5, 1e-12);
  const GroupRow& lc = r.groups[0].cost_class == "LC" ? r.groups[0] : r.groups[1];
  EXPECT_FALSE(lc.gap_best.has_value());

  std::ostringstream csv;
  write_report_csv(r, csv);
  const std::string text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "instance,n,horizon,cost_class,vehicles,bks,runs,feasible_runs,best,average,seconds,gap_best,gap_average");
  EXPECT_NE(text.find("c,5,3,LC,1,,3,2,101.00,102.00,3.0,,\n"), std::string::npos);
}

TEST(InitialOffset, CountsStartingStock) {
  GeneratorParams gp;
  gp.retailers = 3;
  const Instance inst = generate_instance(gp);
  double expect = inst.supplier.holding_cost[0] * inst.supplier.initial_stock;
  for (const Retailer& r : inst.retailers) expect += r.holding_cost * r.initial_stock;
  EXPECT_DOUBLE_EQ(initial_holding_offset(inst), expect);
}

TEST(RunBenchmark, ReportIsReproducibleFromFiles) {
  const fs::path dir = scratch_dir("report");
  GeneratorParams gp;
  gp.retailers = 5;
  gp.horizon = 3;
  gp.vehicles = 1;
  {
    std::ofstream(dir / "inst.json") << serialize_native(generate_instance(gp));
    std::ofstream(dir / "manifest.csv") << "instance,bks,n,horizon,cost_class,vehicles\ninst.json,1000,,,LC,1\n";
  }
  BenchOptions opts;
  opts.runs = 2;
  opts.params.max_iterations = 200;
  opts.params.max_stagnation = 100;
  opts.out_dir = dir / "out";
  const auto manifest = load_manifest(dir / "manifest.csv");
  const BenchmarkReport first = run_benchmark(manifest, opts);
  ASSERT_EQ(first.rows.size(), 1u);
  EXPECT_EQ(first.rows[0].runs.size(), 2u);
  EXPECT_EQ(first.rows[0].feasible_runs, 2);
  EXPECT_EQ(first.rows[0].n, 5);
  EXPECT_TRUE(first.rows[0].gap_best.has_value());

  opts.report_only = true;
  const BenchmarkReport again = run_benchmark(manifest, opts);
  std::ostringstream a, b;
  write_report_csv(first, a);
  write_report_csv(again, b);
  EXPECT_EQ(a.str(), b.str());
  std::ostringstream t1, t2;
  write_report_table(first, t1);
  write_report_table(again, t2);
  EXPECT_EQ(t1.str(), t2.str());
}

TEST(RhoSweep, RowsAndCsv) {
  GeneratorParams gp;
  gp.retailers = 5;
  gp.horizon = 3;
  gp.stockout_factor = 50;
  const Instance inst = generate_instance(gp);
  SearchParams p;
  p.max_iterations = 200;
  p.max_stagnation = 100;
  const std::vector<double> rhos{50, 100, 300, 1000000};
  const auto rows = rho_sweep(inst, rhos, p);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[3].stockout_quantity, 0);
  std::ostringstream out;
  write_rho_csv(rows, out);
  std::istringstream lines(out.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  EXPECT_EQ(count, 5);
  EXPECT_NE(out.str().find("\n1000000,"), std::string::npos);
}

TEST(RhoRow, SameScheduleSameRow) {
  GeneratorParams gp;
  gp.retailers = 4;
  gp.stockout_factor = 10;
  const Instance inst = generate_instance(gp);
  const Solution s = Solution::empty(inst);
  RhoRow a = rho_row(inst, s, 50);
  RhoRow b = rho_row(inst, s, 300);
  EXPECT_EQ(a.total, b.total);
  EXPECT_EQ(a.stockout_quantity, b.stockout_quantity);
  a.rho = b.rho;
  std::ostringstream x, y;
  write_rho_csv(std::vector<RhoRow>{a}, x);
  write_rho_csv(std::vector<RhoRow>{b}, y);
  EXPECT_EQ(x.str(), y.str());
}

}  // namespace
}  // namespace irp
