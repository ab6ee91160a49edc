#include "irp/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace irp {
namespace {

using nlohmann::json;

std::vector<double> split_numbers(const std::string& line, int line_no) {
  std::vector<double> values;
  std::istringstream ss(line);
  std::string token;
  while (ss >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      throw ParseError(line_no, "not a number: '" + token + "'");
    }
    if (used != token.size()) throw ParseError(line_no, "not a number: '" + token + "'");
    values.push_back(v);
  }
  return values;
}

int as_integer(double v, const std::string& field) {
  if (!std::isfinite(v) || std::floor(v) != v) {
    throw ValidationError(field, "must be an integer, got " + std::to_string(v));
  }
  return static_cast<int>(v);
}

Instance parse_classic(std::istream& in, const ParseOptions& options) {
  std::vector<std::pair<int, std::vector<double>>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto values = split_numbers(line, line_no);
    if (!values.empty()) rows.emplace_back(line_no, std::move(values));
  }
  if (rows.empty()) throw ParseError(line_no, "empty instance file");

  const auto& [header_line, header] = rows.front();
  if (header.size() != 3) {
    throw ParseError(header_line, "header needs 3 fields (nodeCount H fleetCapacity), got " +
                                      std::to_string(header.size()));
  }
  const int node_count = as_integer(header[0], "nodeCount");
  if (node_count < 1) throw ValidationError("nodeCount", "must be at least 1");
  const int n = node_count - 1;
  if (static_cast<int>(rows.size()) != node_count + 1) {
    const int bad_line = static_cast<int>(rows.size()) > node_count + 1
                             ? rows[static_cast<std::size_t>(node_count) + 1].first
                             : line_no;
    throw ParseError(bad_line, "expected " + std::to_string(node_count) +
                                   " node lines after the header, got " +
                                   std::to_string(rows.size() - 1));
  }

  Instance inst;
  inst.name = options.name;
  inst.horizon = as_integer(header[1], "H");
  if (inst.horizon < 1) throw ValidationError("H", "must be at least 1");
  const int fleet_capacity = as_integer(header[2], "fleetCapacity");
  if (options.vehicles < 1) throw ValidationError("K", "must be at least 1");
  inst.vehicles = options.vehicles;
  inst.capacity = fleet_capacity / options.vehicles;
  inst.stockout_factor = options.stockout_factor.value_or(kNoStockout);

  const auto horizon = static_cast<std::size_t>(inst.horizon);
  std::vector<Point> coords;
  coords.reserve(static_cast<std::size_t>(node_count));

  {
    const auto& [ln, v] = rows[1];
    if (v.size() != 6) {
      throw ParseError(ln, "supplier line needs 6 fields (id x y startLevel dailyProduction "
                           "holdingCost), got " + std::to_string(v.size()));
    }
    inst.supplier.location = {v[1], v[2]};
    inst.supplier.initial_stock = as_integer(v[3], "supplier.startLevel");
    inst.supplier.production.assign(horizon, as_integer(v[4], "supplier.dailyProduction"));
    inst.supplier.holding_cost.assign(horizon, v[5]);
    coords.push_back(inst.supplier.location);
  }

  for (int i = 1; i <= n; ++i) {
    const auto& [ln, v] = rows[static_cast<std::size_t>(i) + 1];
    if (v.size() != 8) {
      throw ParseError(ln, "retailer line needs 8 fields (id x y startLevel maxLevel minLevel "
                           "dailyDemand holdingCost), got " + std::to_string(v.size()));
    }
    const std::string prefix = "retailer[" + std::to_string(i) + "].";
    Retailer r;
    r.location = {v[1], v[2]};
    r.initial_stock = as_integer(v[3], prefix + "startLevel");
    r.max_level = as_integer(v[4], prefix + "maxLevel");
    if (as_integer(v[5], prefix + "minLevel") != 0) {
      throw ValidationError(prefix + "minLevel", "nonzero minimum levels are not supported");
    }
    r.demand.assign(horizon, as_integer(v[6], prefix + "dailyDemand"));
    r.holding_cost = v[7];
    coords.push_back(r.location);
    inst.retailers.push_back(std::move(r));
  }

  inst.cost = build_cost_matrix(coords, options.rounding);
  inst.validate();
  return inst;
}

template <typename T>
T required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ValidationError(where + key, "missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(where + key, e.what());
  }
}

std::vector<int> int_vector(const json& j, const char* key, const std::string& where) {
  const auto values = required<std::vector<double>>(j, key, where);
  std::vector<int> out;
  for (std::size_t t = 0; t < values.size(); ++t) {
    out.push_back(as_integer(values[t], where + key + "[" + std::to_string(t) + "]"));
  }
  return out;
}

std::vector<int> per_day_ints(const json& j, const char* key, const std::string& where,
                              int horizon) {
  if (j.contains(key) && j.at(key).is_number()) {
    return std::vector<int>(static_cast<std::size_t>(horizon),
                            as_integer(j.at(key).get<double>(), where + key));
  }
  return int_vector(j, key, where);
}

std::vector<double> per_day_reals(const json& j, const char* key, const std::string& where,
                                  int horizon) {
  if (j.contains(key) && j.at(key).is_number()) {
    return std::vector<double>(static_cast<std::size_t>(horizon), j.at(key).get<double>());
  }
  return required<std::vector<double>>(j, key, where);
}

Instance parse_native(std::istream& in, const ParseOptions& options) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    // Only a byte offset is available here; it is part of e.what().
    throw ParseError(0, std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError(1, "top level must be an object");

  Instance inst;
  inst.name = doc.value("name", options.name);
  inst.horizon = required<int>(doc, "horizon", "");
  inst.vehicles = required<int>(doc, "vehicles", "");
  inst.capacity = as_integer(required<double>(doc, "capacity", ""), "capacity");
  if (options.stockout_factor) {
    inst.stockout_factor = *options.stockout_factor;
  } else if (doc.contains("stockout_factor") && !doc.at("stockout_factor").is_null()) {
    inst.stockout_factor = doc.at("stockout_factor").get<double>();
  }
  if (inst.horizon < 1) throw ValidationError("horizon", "must be at least 1");

  const json& sup = doc.at("supplier");
  inst.supplier.location = {required<double>(sup, "x", "supplier."),
                            required<double>(sup, "y", "supplier.")};
  inst.supplier.initial_stock =
      as_integer(required<double>(sup, "initial_stock", "supplier."), "supplier.initial_stock");
  inst.supplier.production = per_day_ints(sup, "production", "supplier.", inst.horizon);
  inst.supplier.holding_cost = per_day_reals(sup, "holding_cost", "supplier.", inst.horizon);

  std::vector<Point> coords{inst.supplier.location};
  const json& rets = doc.at("retailers");
  for (std::size_t k = 0; k < rets.size(); ++k) {
    const json& rj = rets[k];
    const std::string where = "retailers[" + std::to_string(k + 1) + "].";
    Retailer r;
    r.location = {required<double>(rj, "x", where), required<double>(rj, "y", where)};
    r.initial_stock = as_integer(required<double>(rj, "initial_stock", where), where + "initial_stock");
    r.max_level = as_integer(required<double>(rj, "max_level", where), where + "max_level");
    r.demand = per_day_ints(rj, "demand", where, inst.horizon);
    r.holding_cost = required<double>(rj, "holding_cost", where);
    coords.push_back(r.location);
    inst.retailers.push_back(std::move(r));
  }

  if (doc.contains("cost_matrix")) {
    const auto rows = doc.at("cost_matrix").get<std::vector<std::vector<double>>>();
    if (rows.size() != coords.size()) {
      throw ValidationError("cost_matrix", "must have one row per node");
    }
    inst.cost = CostMatrix(static_cast<int>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) {
        throw ValidationError("cost_matrix[" + std::to_string(i) + "]", "row length mismatch");
      }
      for (std::size_t j = 0; j < rows.size(); ++j) {
        inst.cost(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
      }
    }
  } else {
    const std::string mode = doc.value("cost_rounding", std::string("nearest"));
    CostRounding rounding = options.rounding;
    if (mode == "exact") rounding = CostRounding::kExact;
    if (mode == "nearest") rounding = CostRounding::kNearestInteger;
    inst.cost = build_cost_matrix(coords, rounding);
  }
  inst.validate();
  return inst;
}

}  // namespace

double Instance::supplier_credit(int day) const {
  double credit = 0.0;
  for (int s = day; s < horizon; ++s) credit += supplier.holding_cost[static_cast<std::size_t>(s)];
  return credit;
}

void Instance::validate() const {
  if (horizon < 1) throw ValidationError("H", "must be at least 1");
  if (vehicles < 1) throw ValidationError("K", "must be at least 1");
  if (capacity <= 0) throw ValidationError("Q", "must be positive");
  if (!(stockout_factor > 1.0)) {
    throw ValidationError("rho", "must exceed 1 (or be the no-stock-out sentinel)");
  }
  const auto h = static_cast<std::size_t>(horizon);
  if (supplier.production.size() != h) throw ValidationError("supplier.production", "needs H entries");
  if (supplier.holding_cost.size() != h) throw ValidationError("supplier.holding_cost", "needs H entries");
  for (std::size_t t = 0; t < h; ++t) {
    if (supplier.holding_cost[t] < 0) {
      throw ValidationError("supplier.holding_cost[" + std::to_string(t) + "]", "must be >= 0");
    }
  }
  for (int i = 1; i <= num_retailers(); ++i) {
    const Retailer& r = retailer(i);
    const std::string prefix = "retailer[" + std::to_string(i) + "].";
    if (r.initial_stock < 0) throw ValidationError(prefix + "I0", "must be >= 0");
    if (r.initial_stock > r.max_level) throw ValidationError(prefix + "I0", "exceeds max level U");
    if (r.demand.size() != h) throw ValidationError(prefix + "demand", "needs H entries");
    for (std::size_t t = 0; t < h; ++t) {
      if (r.demand[t] < 0) {
        throw ValidationError(prefix + "demand[" + std::to_string(t) + "]", "must be >= 0");
      }
    }
    if (!(r.holding_cost > 0)) throw ValidationError(prefix + "h", "must be positive");
  }
  if (cost.size() != num_nodes()) throw ValidationError("cost", "must be (n+1)x(n+1)");
  for (int i = 0; i < cost.size(); ++i) {
    if (cost(i, i) != 0.0) throw ValidationError("cost", "diagonal must be zero");
    for (int j = 0; j < cost.size(); ++j) {
      if (!(cost(i, j) >= 0.0) || !std::isfinite(cost(i, j))) {
        throw ValidationError("cost", "entries must be finite and nonnegative");
      }
    }
  }
}

CostMatrix build_cost_matrix(std::span<const Point> coords, CostRounding rounding) {
  CostMatrix m(static_cast<int>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) {
    for (std::size_t j = i + 1; j < coords.size(); ++j) {
      double d = std::hypot(coords[i].x - coords[j].x, coords[i].y - coords[j].y);
      if (rounding == CostRounding::kNearestInteger) d = std::round(d);
      m(static_cast<int>(i), static_cast<int>(j)) = d;
      m(static_cast<int>(j), static_cast<int>(i)) = d;
    }
  }
  return m;
}

Instance parse_instance(std::istream& in, InstanceFormat format, const ParseOptions& options) {
  if (format == InstanceFormat::kClassic) return parse_classic(in, options);
  try {
    return parse_native(in, options);
  } catch (const json::exception& e) {
    throw ValidationError("document", e.what());
  }
}

Instance load_instance(const std::filesystem::path& path, InstanceFormat format,
                       ParseOptions options) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  if (options.name.empty()) options.name = path.stem().string();
  return parse_instance(in, format, options);
}

InstanceFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".json" ? InstanceFormat::kNative : InstanceFormat::kClassic;
}

std::string serialize_native(const Instance& inst) {
  json doc;
  doc["name"] = inst.name;
  doc["horizon"] = inst.horizon;
  doc["vehicles"] = inst.vehicles;
  doc["capacity"] = inst.capacity;
  doc["stockout_factor"] =
      inst.allows_stockout() ? json(inst.stockout_factor) : json(nullptr);
  doc["supplier"] = {{"x", inst.supplier.location.x},
                     {"y", inst.supplier.location.y},
                     {"initial_stock", inst.supplier.initial_stock},
                     {"production", inst.supplier.production},
                     {"holding_cost", inst.supplier.holding_cost}};
  json rets = json::array();
  for (const Retailer& r : inst.retailers) {
    rets.push_back({{"x", r.location.x},
                    {"y", r.location.y},
                    {"initial_stock", r.initial_stock},
                    {"max_level", r.max_level},
                    {"demand", r.demand},
                    {"holding_cost", r.holding_cost}});
  }
  doc["retailers"] = std::move(rets);
  json rows = json::array();
  for (int i = 0; i < inst.cost.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < inst.cost.size(); ++j) row.push_back(inst.cost(i, j));
    rows.push_back(std::move(row));
  }
  doc["cost_matrix"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace irp
