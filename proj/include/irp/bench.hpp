#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "irp/hgs.hpp"
#include "irp/instance.hpp"
#include "irp/solution.hpp"

namespace irp {

// (solution / bks - 1) * 100; negative when the solution improves on the BKS.
double gap_percent(double solution, double bks);

// Holding cost of the starting stock (supplier and retailers). Published
// best-known values for the classic files count it; the solver's objective
// does not, since no decision affects it.
double initial_holding_offset(const Instance& instance);

// One CSV row: instance,bks,n,horizon,cost_class,vehicles. Only `instance`
// is required; relative paths are resolved against the manifest directory.
struct ManifestEntry {
  std::filesystem::path instance;
  std::optional<double> bks;
  std::optional<int> n;
  std::optional<int> horizon;
  std::string cost_class;
  int vehicles = 1;
};

// Throws ParseError on malformed rows.
std::vector<ManifestEntry> read_manifest(std::istream& in, const std::filesystem::path& base_dir = {});
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

struct RunOutcome {
  std::uint64_t seed = 0;
  bool feasible = false;
  double cost = 0.0;  // benchmark convention, offset included
  double seconds = 0.0;
  long iterations = 0;
};

struct InstanceRow {
  std::string name;
  int n = 0;
  int horizon = 0;
  int vehicles = 1;
  std::string cost_class;
  std::optional<double> bks;
  std::vector<RunOutcome> runs;

  // Filled by summarize(); averages are over feasible runs.
  int feasible_runs = 0;
  double best = 0.0;
  double average = 0.0;
  double seconds = 0.0;
  std::optional<double> gap_best;
  std::optional<double> gap_average;
};

// Averages over the instances sharing (n, H, cost class).
struct GroupRow {
  int n = 0;
  int horizon = 0;
  std::string cost_class;
  int instances = 0;
  double best = 0.0;
  double average = 0.0;
  double seconds = 0.0;
  std::optional<double> gap_best;
  std::optional<double> gap_average;
};

struct BenchmarkReport {
  std::vector<InstanceRow> rows;
  std::vector<GroupRow> groups;
};

BenchmarkReport summarize(std::vector<InstanceRow> rows);
void write_report_csv(const BenchmarkReport& report, std::ostream& out);
void write_report_table(const BenchmarkReport& report, std::ostream& out);

struct BenchOptions {
  int runs = 10;
  std::uint64_t first_seed = 1;
  SearchParams params;
  ParseOptions parse;  // vehicles come from the manifest
  std::optional<InstanceFormat> format;  // unset: guessed from each path
  std::filesystem::path out_dir = "bench-out";
  // Rebuild the report from saved solution and stats files without solving.
  bool report_only = false;
  bool add_offset = true;
  std::ostream* log = nullptr;
};

// Solves every entry `runs` times, saving <out_dir>/<stem>.seed<k>.json plus
// a .stats.json sidecar. Report numbers are recomputed from the saved files.
BenchmarkReport run_benchmark(const std::vector<ManifestEntry>& entries, const BenchOptions& options);

struct RhoRow {
  double rho = 0.0;
  bool feasible = false;
  double total = 0.0;  // routing + holding; the stock-out penalty is left out
  double routing = 0.0;
  double inventory = 0.0;
  long stockout_quantity = 0;
  long delivered_quantity = 0;
};

RhoRow rho_row(const Instance& instance, const Solution& solution, double rho, bool feasible = true);
std::vector<RhoRow> rho_sweep(const Instance& instance, std::span<const double> rhos, const SearchParams& params);
void write_rho_csv(std::span<const RhoRow> rows, std::ostream& out);

// Fixed-point with `digits` decimals; "inf" / "nan" for non-finite values.
std::string format_number(double v, int digits = 2);

}  // namespace irp
