#include "irp/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "irp/solution_io.hpp"

namespace irp {
namespace {

using json = nlohmann::json;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto a = cell.find_first_not_of(" \t\r");
    const auto b = cell.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? std::string{} : cell.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
std::optional<T> parse_cell(const std::string& cell, int line, const char* what) {
  if (cell.empty()) return std::nullopt;
  std::istringstream ss(cell);
  T v{};
  ss >> v;
  if (!ss || !ss.eof()) throw ParseError(line, std::string("bad ") + what + " '" + cell + "'");
  return v;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string opt_number(const std::optional<double>& v, int digits) { return v ? format_number(*v, digits) : ""; }

}  // namespace

double gap_percent(double solution, double bks) { return (solution / bks - 1.0) * 100.0; }

double initial_holding_offset(const Instance& inst) {
  double v = inst.supplier.holding_cost.empty() ? 0.0 : inst.supplier.holding_cost.front() * inst.supplier.initial_stock;
  for (const Retailer& r : inst.retailers) v += r.holding_cost * r.initial_stock;
  return v;
}

std::string format_number(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream ss;
  ss.imbue(std::locale::classic());
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

std::vector<ManifestEntry> read_manifest(std::istream& in, const std::filesystem::path& base_dir) {
  std::vector<ManifestEntry> out;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (!header_seen) {
      header_seen = true;
      if (cells.empty() || cells[0] != "instance") throw ParseError(lineno, "manifest header must start with 'instance'");
      continue;
    }
    if (cells.empty() || cells[0].empty()) throw ParseError(lineno, "missing instance path");
    if (cells.size() > 6) throw ParseError(lineno, "too many columns");
    auto cell = [&](std::size_t k) { return k < cells.size() ? cells[k] : std::string{}; };
    ManifestEntry e;
    e.instance = cells[0];
    if (e.instance.is_relative() && !base_dir.empty()) e.instance = base_dir / e.instance;
    e.bks = parse_cell<double>(cell(1), lineno, "bks");
    e.n = parse_cell<int>(cell(2), lineno, "n");
    e.horizon = parse_cell<int>(cell(3), lineno, "horizon");
    e.cost_class = cell(4);
    e.vehicles = parse_cell<int>(cell(5), lineno, "vehicles").value_or(1);
    if (e.vehicles < 1) throw ParseError(lineno, "vehicles must be positive");
    out.push_back(std::move(e));
  }
  if (!header_seen) throw ParseError(lineno, "empty manifest");
  return out;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return read_manifest(in, path.parent_path());
}

BenchmarkReport summarize(std::vector<InstanceRow> rows) {
  BenchmarkReport report;
  using Key = std::tuple<int, int, std::string>;
  std::map<Key, std::vector<const InstanceRow*>> groups;
  for (InstanceRow& row : rows) {
    row.feasible_runs = 0;
    row.best = std::numeric_limits<double>::infinity();
    double sum = 0.0, secs = 0.0;
    for (const RunOutcome& r : row.runs) {
      secs += r.seconds;
      if (!r.feasible) continue;
      ++row.feasible_runs;
      sum += r.cost;
      row.best = std::min(row.best, r.cost);
    }
    row.average = row.feasible_runs > 0 ? sum / row.feasible_runs : std::numeric_limits<double>::infinity();
    row.seconds = row.runs.empty() ? 0.0 : secs / static_cast<double>(row.runs.size());
    row.gap_best.reset();
    row.gap_average.reset();
    if (row.bks && row.feasible_runs > 0) {
      row.gap_best = gap_percent(row.best, *row.bks);
      row.gap_average = gap_percent(row.average, *row.bks);
    }
  }
  report.rows = std::move(rows);
  for (const InstanceRow& row : report.rows) groups[{row.n, row.horizon, row.cost_class}].push_back(&row);
  for (const auto& [key, members] : groups) {
    GroupRow g;
    std::tie(g.n, g.horizon, g.cost_class) = key;
    g.instances = static_cast<int>(members.size());
    double gb = 0.0, ga = 0.0;
    bool all_gaps = true;
    for (const InstanceRow* r : members) {
      g.best += r->best;
      g.average += r->average;
      g.seconds += r->seconds;
      if (r->gap_best) {
        gb += *r->gap_best;
        ga += *r->gap_average;
      } else {
        all_gaps = false;
      }
    }
    const double m = static_cast<double>(members.size());
    g.best /= m;
    g.average /= m;
    g.seconds /= m;
    if (all_gaps) {
      g.gap_best = gb / m;
      g.gap_average = ga / m;
    }
    report.groups.push_back(std::move(g));
  }
  return report;
}

void write_report_csv(const BenchmarkReport& report, std::ostream& out) {
  out << "instance,n,horizon,cost_class,vehicles,bks,runs,feasible_runs,best,average,seconds,gap_best,gap_average\n";
  for (const InstanceRow& r : report.rows) {
    out << r.name << ',' << r.n << ',' << r.horizon << ',' << r.cost_class << ',' << r.vehicles << ','
        << opt_number(r.bks, 2) << ',' << r.runs.size() << ',' << r.feasible_runs << ',' << format_number(r.best) << ','
        << format_number(r.average) << ',' << format_number(r.seconds, 1) << ',' << opt_number(r.gap_best, 2) << ','
        << opt_number(r.gap_average, 2) << '\n';
  }
}

void write_report_table(const BenchmarkReport& report, std::ostream& out) {
  auto cell = [](const std::string& s, int w) {
    std::ostringstream ss;
    ss << std::setw(w) << s;
    return ss.str();
  };
  out << cell("n", 5) << cell("H", 4) << cell("C", 4) << cell("inst", 6) << cell("Avg", 12) << cell("Gap(%)", 9)
      << cell("T(s)", 9) << cell("Best", 12) << cell("GapBest(%)", 12) << '\n';
  for (const GroupRow& g : report.groups) {
    out << cell(std::to_string(g.n), 5) << cell(std::to_string(g.horizon), 4) << cell(g.cost_class, 4)
        << cell(std::to_string(g.instances), 6) << cell(format_number(g.average), 12)
        << cell(opt_number(g.gap_average, 2), 9) << cell(format_number(g.seconds, 1), 9)
        << cell(format_number(g.best), 12) << cell(opt_number(g.gap_best, 2), 12) << '\n';
  }
}

BenchmarkReport run_benchmark(const std::vector<ManifestEntry>& entries, const BenchOptions& options) {
  std::filesystem::create_directories(options.out_dir);
  std::vector<InstanceRow> rows;
  for (const ManifestEntry& e : entries) {
    ParseOptions parse = options.parse;
    parse.vehicles = e.vehicles;
    const InstanceFormat fmt = options.format.value_or(format_from_path(e.instance));
    const Instance inst = load_instance(e.instance, fmt, parse);
    InstanceRow row;
    row.name = inst.name.empty() ? e.instance.stem().string() : inst.name;
    row.n = e.n.value_or(inst.num_retailers());
    row.horizon = e.horizon.value_or(inst.horizon);
    row.vehicles = inst.vehicles;
    row.cost_class = e.cost_class;
    row.bks = e.bks;
    const double offset = options.add_offset ? initial_holding_offset(inst) : 0.0;
    for (int k = 0; k < options.runs; ++k) {
      const std::uint64_t seed = options.first_seed + static_cast<std::uint64_t>(k);
      const std::string stem = e.instance.stem().string() + ".K" + std::to_string(inst.vehicles) + ".seed" + std::to_string(seed);
      const auto sol_path = options.out_dir / (stem + ".json");
      const auto stats_path = options.out_dir / (stem + ".stats.json");
      if (!options.report_only) {
        SearchParams p = options.params;
        p.seed = seed;
        const SearchResult res = run(inst, p);
        write_file(sol_path, write_record(make_record(inst, res.best, 0.0)));
        const json stats{{"seconds", res.seconds}, {"iterations", res.iterations}, {"seed", seed}};
        write_file(stats_path, stats.dump(1));
        if (options.log) {
          *options.log << row.name << " seed " << seed << ": " << (res.feasible ? format_number(res.cost.total + offset) : "infeasible")
                       << " in " << format_number(res.seconds, 1) << "s\n";
        }
      }
      const SolutionRecord rec = read_record(read_file(sol_path));
      const ValidationReport check = validate(inst, rec);
      RunOutcome out;
      out.seed = seed;
      out.feasible = check.ok() && check.cost && check.cost->capacity_feasible() && std::isfinite(check.cost->total);
      out.cost = check.cost ? check.cost->total + offset : std::numeric_limits<double>::infinity();
      if (std::filesystem::exists(stats_path)) {
        const json stats = json::parse(read_file(stats_path));
        out.seconds = stats.value("seconds", 0.0);
        out.iterations = stats.value("iterations", 0L);
      }
      row.runs.push_back(out);
    }
    rows.push_back(std::move(row));
  }
  return summarize(std::move(rows));
}

RhoRow rho_row(const Instance& instance, const Solution& solution, double rho, bool feasible) {
  Instance copy = instance;
  copy.stockout_factor = rho;
  const CostBreakdown c = evaluate(copy, solution, 0.0);
  RhoRow row;
  row.rho = rho;
  row.feasible = feasible;
  row.routing = c.routing;
  row.inventory = c.inventory();
  row.total = c.routing + c.inventory();
  row.stockout_quantity = c.stockout_quantity;
  row.delivered_quantity = c.delivered_quantity;
  return row;
}

std::vector<RhoRow> rho_sweep(const Instance& instance, std::span<const double> rhos, const SearchParams& params) {
  std::vector<RhoRow> rows;
  for (double rho : rhos) {
    Instance copy = instance;
    copy.stockout_factor = rho;
    const SearchResult res = run(copy, params);
    rows.push_back(rho_row(instance, res.best, rho, res.feasible));
  }
  return rows;
}

void write_rho_csv(std::span<const RhoRow> rows, std::ostream& out) {
  out << "rho,feasible,total_cost,routing_cost,inventory_cost,stockout_quantity,delivered_quantity\n";
  for (const RhoRow& r : rows) {
    const bool integral = std::isfinite(r.rho) && r.rho == std::floor(r.rho);
    out << format_number(r.rho, integral ? 0 : 6) << ',' << (r.feasible ? 1 : 0) << ',' << format_number(r.total) << ','
        << format_number(r.routing) << ',' << format_number(r.inventory) << ',' << r.stockout_quantity << ','
        << r.delivered_quantity << '\n';
  }
}

}  // namespace irp
