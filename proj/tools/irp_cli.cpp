#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "irp/bench.hpp"
#include "irp/generator.hpp"
#include "irp/hgs.hpp"
#include "irp/instance.hpp"
#include "irp/solution_io.hpp"

namespace {

using namespace irp;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;

struct InstanceFlags {
  std::string format;  // empty: guess from extension
  int vehicles = 1;
  std::optional<double> rho;
  bool no_stockout = false;
  std::string rounding = "nearest";

  void add(CLI::App* app) {
    app->add_option("--format", format, "Instance format")->check(CLI::IsMember({"classic", "native"}));
    app->add_option("--vehicles", vehicles, "Fleet size K (classic files)")->check(CLI::PositiveNumber);
    app->add_option("--rho", rho, "Stock-out penalty factor: a lost unit costs rho * h_i")->check(CLI::NonNegativeNumber);
    app->add_flag("--no-stockout", no_stockout, "Forbid stock-outs");
    app->add_option("--rounding", rounding, "Arc cost rounding for classic files")
        ->check(CLI::IsMember({"nearest", "exact"}));
  }

  ParseOptions parse_options() const {
    ParseOptions o;
    o.vehicles = vehicles;
    o.rounding = rounding == "exact" ? CostRounding::kExact : CostRounding::kNearestInteger;
    if (no_stockout) o.stockout_factor = kNoStockout;
    else if (rho) o.stockout_factor = *rho;
    return o;
  }

  std::optional<InstanceFormat> instance_format() const {
    if (format.empty()) return std::nullopt;
    return format == "native" ? InstanceFormat::kNative : InstanceFormat::kClassic;
  }

  Instance load(const std::string& path) const {
    return load_instance(path, instance_format().value_or(format_from_path(path)), parse_options());
  }
};

struct SearchFlags {
  std::uint64_t seed = 1;
  std::optional<double> time_limit;
  long max_iters = 100000;
  long max_stagnation = 10000;
  std::optional<double> omega;
  bool verbose = false;

  void add(CLI::App* app) {
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--time-limit", time_limit, "Seconds per run (default 2400, or 7200 when n >= 50 and H >= 6)");
    app->add_option("--max-iters", max_iters, "Iteration limit");
    app->add_option("--max-stagnation", max_stagnation, "Iterations without improvement before stopping");
    app->add_option("--omega", omega, "Initial capacity penalty");
    app->add_flag("-v,--verbose", verbose, "Progress log on stderr");
  }

  SearchParams params() const {
    SearchParams p;
    p.seed = seed;
    p.time_limit = time_limit;
    p.max_iterations = max_iters;
    p.max_stagnation = max_stagnation;
    p.initial_omega = omega;
    if (verbose) p.log = &std::cerr;
    return p;
  }
};

std::string summary_line(const Instance& inst, const SearchResult& r) {
  std::ostringstream os;
  os << inst.name << ": " << (r.feasible ? "feasible" : "NO FEASIBLE SOLUTION") << " total "
     << format_number(r.cost.objective()) << " routing " << format_number(r.cost.routing) << " supplier_holding "
     << format_number(r.cost.supplier_holding) << " retailer_holding " << format_number(r.cost.retailer_holding)
     << " stockout_cost " << format_number(r.cost.stockout_penalty) << " stockout_qty " << r.cost.stockout_quantity
     << " delivered " << r.cost.delivered_quantity << " iterations " << r.iterations << " time "
     << format_number(r.seconds, 2) << "s";
  return os.str();
}

void print_piece_stats(const Instance& inst, const std::vector<std::vector<std::size_t>>& by_day, std::ostream& out) {
  out << "pieces per day (C_t over all DS evaluations): day,samples,median,p90,max\n";
  for (std::size_t t = 0; t < by_day.size(); ++t) {
    std::vector<std::size_t> v = by_day[t];
    if (v.empty()) {
      out << t << ",0,,,\n";
      continue;
    }
    std::sort(v.begin(), v.end());
    out << t << ',' << v.size() << ',' << v[v.size() / 2] << ',' << v[(v.size() * 9) / 10] << ',' << v.back() << '\n';
  }
  int min_u = std::numeric_limits<int>::max();
  for (const Retailer& r : inst.retailers) min_u = std::min(min_u, r.max_level);
  out << "smallest max level U_i: " << min_u << '\n';
}

int solve_command(const std::string& instance_path, const InstanceFlags& iflags, const SearchFlags& sflags, int runs,
                  const std::string& out_path, bool instrument, const std::string& pieces_csv) {
  const Instance inst = iflags.load(instance_path);
  SearchParams params = sflags.params();
  std::vector<std::vector<std::size_t>> by_day(static_cast<std::size_t>(inst.horizon));
  std::ofstream csv;
  if (!pieces_csv.empty()) {
    csv.open(pieces_csv);
    if (!csv) throw std::runtime_error("cannot write " + pieces_csv);
    csv << "day,retailer,pieces,max_level\n";
  }
  const PieceSink sink = [&](int day, int retailer, std::size_t pieces) {
    by_day[static_cast<std::size_t>(day)].push_back(pieces);
    if (csv) csv << day << ',' << retailer << ',' << pieces << ',' << inst.retailer(retailer).max_level << '\n';
  };
  if (instrument || !pieces_csv.empty()) params.pieces = &sink;

  SearchResult best;
  bool have = false;
  for (int k = 0; k < runs; ++k) {
    params.seed = sflags.seed + static_cast<std::uint64_t>(k);
    SearchResult r = run(inst, params);
    if (runs > 1) std::cout << "seed " << params.seed << ": " << summary_line(inst, r) << '\n';
    const bool better = !have || (r.feasible && !best.feasible) ||
                        (r.feasible == best.feasible && r.cost.total < best.cost.total);
    if (better) {
      best = std::move(r);
      have = true;
    }
  }
  const std::string doc = write_record(make_record(inst, best.best, 0.0));
  if (out_path == "-") {
    std::cout << doc << '\n';
  } else if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << doc;
  }
  std::cout << summary_line(inst, best) << '\n';
  if (instrument) print_piece_stats(inst, by_day, std::cout);
  return best.feasible ? kExitOk : kExitInfeasible;
}

std::vector<double> parse_rho_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf") {
      out.push_back(kNoStockout);
      continue;
    }
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size() || v < 0) throw CLI::ValidationError("--rhos", "bad value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("--rhos", "empty list");
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inventory routing solver"};
  app.require_subcommand(1);

  InstanceFlags iflags;
  SearchFlags sflags;

  std::string instance_path, out_path, pieces_csv;
  int runs = 1;
  bool instrument = false;
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  solve->add_option("instance", instance_path, "Instance file")->required();
  solve->add_option("-o,--out", out_path, "Solution file ('-' for stdout)");
  solve->add_option("--runs", runs, "Independent runs with consecutive seeds; the best is kept")->check(CLI::PositiveNumber);
  solve->add_flag("--instrument-pieces", instrument, "Report the piece counts of the DS cost-to-go functions");
  solve->add_option("--pieces-csv", pieces_csv, "Write every piece-count sample as CSV");
  iflags.add(solve);
  sflags.add(solve);

  std::string manifest, out_dir = "bench-out", report_csv;
  int bench_runs = 10;
  bool report_only = false, no_offset = false;
  auto* bench = app.add_subcommand("bench", "Run a benchmark manifest and report gaps");
  bench->add_option("manifest", manifest, "CSV: instance,bks,n,horizon,cost_class,vehicles")->required();
  bench->add_option("--runs", bench_runs, "Runs per instance")->check(CLI::PositiveNumber);
  bench->add_option("--out-dir", out_dir, "Directory for solutions and stats");
  bench->add_option("--csv", report_csv, "Report CSV (default <out-dir>/report.csv)");
  bench->add_flag("--report-only", report_only, "Rebuild the report from saved files");
  bench->add_flag("--no-offset", no_offset, "Do not add the initial-stock holding cost before comparing with BKS");
  iflags.add(bench);
  sflags.add(bench);

  std::string rho_text = "50,100,300,1000000", rho_csv;
  auto* sweep = app.add_subcommand("rho-sweep", "Solve one instance for several stock-out penalties");
  sweep->add_option("instance", instance_path, "Instance file")->required();
  sweep->add_option("--rhos", rho_text, "Comma-separated rho values ('inf' forbids stock-outs)");
  sweep->add_option("--csv", rho_csv, "Output CSV (default stdout)");
  iflags.add(sweep);
  sflags.add(sweep);

  std::string solution_path;
  auto* check = app.add_subcommand("validate", "Check a solution file against an instance");
  check->add_option("instance", instance_path, "Instance file")->required();
  check->add_option("solution", solution_path, "Solution file")->required();
  iflags.add(check);

  GeneratorParams gen;
  std::string gen_class = "LC", gen_out;
  std::optional<double> gen_rho;
  auto* generate = app.add_subcommand("generate", "Write a random benchmark-style instance (native format)");
  generate->add_option("--n", gen.retailers, "Retailers")->check(CLI::PositiveNumber);
  generate->add_option("--horizon", gen.horizon, "Days")->check(CLI::PositiveNumber);
  generate->add_option("--vehicles", gen.vehicles, "Fleet size")->check(CLI::PositiveNumber);
  generate->add_option("--cost-class", gen_class, "LC or HC")->check(CLI::IsMember({"LC", "HC"}));
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--rho", gen_rho, "Stock-out penalty factor (default: forbidden)");
  generate->add_option("-o,--out", gen_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return solve_command(instance_path, iflags, sflags, runs, out_path, instrument, pieces_csv);

    if (*bench) {
      BenchOptions opts;
      opts.runs = bench_runs;
      opts.first_seed = sflags.seed;
      opts.params = sflags.params();
      opts.parse = iflags.parse_options();
      opts.format = iflags.instance_format();
      opts.out_dir = out_dir;
      opts.report_only = report_only;
      opts.add_offset = !no_offset;
      opts.log = &std::cerr;
      const BenchmarkReport report = run_benchmark(load_manifest(manifest), opts);
      const std::string csv_path = report_csv.empty() ? (std::filesystem::path(out_dir) / "report.csv").string() : report_csv;
      std::ofstream csv(csv_path);
      if (!csv) throw std::runtime_error("cannot write " + csv_path);
      write_report_csv(report, csv);
      write_report_table(report, std::cout);
      return kExitOk;
    }

    if (*sweep) {
      const Instance inst = iflags.load(instance_path);
      const std::vector<double> rhos = parse_rho_list(rho_text);
      const std::vector<RhoRow> rows = rho_sweep(inst, rhos, sflags.params());
      if (rho_csv.empty()) {
        write_rho_csv(rows, std::cout);
      } else {
        std::ofstream csv(rho_csv);
        if (!csv) throw std::runtime_error("cannot write " + rho_csv);
        write_rho_csv(rows, csv);
      }
      return kExitOk;
    }

    if (*check) {
      const Instance inst = iflags.load(instance_path);
      const SolutionRecord rec = read_record(read_text(solution_path));
      const ValidationReport report = validate(inst, rec);
      std::cout << report.to_text();
      if (report.cost) {
        std::cout << "total " << format_number(report.cost->objective(), 6) << " routing "
                  << format_number(report.cost->routing, 6) << " inventory " << format_number(report.cost->inventory(), 6)
                  << " stockout_qty " << report.cost->stockout_quantity << '\n';
      }
      return report.ok() ? kExitOk : kExitInfeasible;
    }

    if (*generate) {
      gen.cost_class = gen_class == "HC" ? CostClass::kHigh : CostClass::kLow;
      gen.stockout_factor = gen_rho.value_or(kNoStockout);
      const std::string doc = serialize_native(generate_instance(gen));
      if (gen_out.empty()) {
        std::cout << doc << '\n';
      } else {
        std::ofstream out(gen_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + gen_out);
        out << doc;
      }
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ValidationError& e) {
    std::cerr << "invalid instance: " << e.what() << '\n';
    return kExitParse;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  return kExitUsage;
}
