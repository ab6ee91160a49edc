#include "irp/solution_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace irp {
namespace {

using json = nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json cost_to_json(const CostBreakdown& c) {
  return {{"supplier_holding", number_or_null(c.supplier_holding)},
          {"retailer_holding", number_or_null(c.retailer_holding)},
          {"stockout_penalty", number_or_null(c.stockout_penalty)},
          {"routing", number_or_null(c.routing)},
          {"capacity_excess_penalty", number_or_null(c.capacity_excess_penalty)},
          {"total", number_or_null(c.total)},
          {"capacity_excess", c.capacity_excess},
          {"stockout_quantity", c.stockout_quantity},
          {"delivered_quantity", c.delivered_quantity}};
}

CostBreakdown cost_from_json(const json& j) {
  CostBreakdown c;
  c.supplier_holding = number_or_inf(j.at("supplier_holding"));
  c.retailer_holding = number_or_inf(j.at("retailer_holding"));
  c.stockout_penalty = number_or_inf(j.at("stockout_penalty"));
  c.routing = number_or_inf(j.at("routing"));
  c.capacity_excess_penalty = number_or_inf(j.at("capacity_excess_penalty"));
  c.total = number_or_inf(j.at("total"));
  c.capacity_excess = j.value("capacity_excess", 0L);
  c.stockout_quantity = j.value("stockout_quantity", 0L);
  c.delivered_quantity = j.value("delivered_quantity", 0L);
  return c;
}

// Per-day delivered totals keyed by retailer, summed across routes.
std::vector<std::vector<int>> delivered_by_day(const Instance& instance, const SolutionRecord& record) {
  std::vector<std::vector<int>> q(static_cast<std::size_t>(instance.horizon),
                                  std::vector<int>(static_cast<std::size_t>(instance.num_nodes()), 0));
  for (std::size_t t = 0; t < record.days.size() && t < q.size(); ++t) {
    for (const RouteRecord& r : record.days[t]) {
      for (auto [i, qty] : r.deliveries) {
        if (i >= 1 && i <= instance.num_retailers()) q[t][static_cast<std::size_t>(i)] += qty;
      }
    }
  }
  return q;
}

long delivery_sum(const RouteRecord& r) {
  long s = 0;
  for (auto [i, qty] : r.deliveries) s += qty;
  return s;
}

std::string at_day(std::size_t t) { return "day " + std::to_string(t) + ": "; }

}  // namespace

SolutionRecord make_record(const Instance& instance, const Solution& solution, double omega) {
  SolutionRecord rec;
  rec.instance = instance.name;
  rec.omega = omega;
  rec.days.resize(static_cast<std::size_t>(instance.horizon));
  for (int t = 0; t < instance.horizon; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    int vehicle = 0;
    for (const Route& route : solution.routes[ut]) {
      RouteRecord rr;
      rr.vehicle = vehicle++;
      int prev = kDepot;
      for (int v : route) {
        rr.arcs.emplace_back(prev, v);
        rr.deliveries.emplace_back(v, solution.quantities[ut][static_cast<std::size_t>(v)]);
        prev = v;
      }
      rr.arcs.emplace_back(prev, kDepot);
      rec.days[ut].push_back(std::move(rr));
    }
  }
  refresh_derived_fields(instance, rec);
  rec.cost = evaluate(instance, solution, omega);
  return rec;
}

void refresh_derived_fields(const Instance& instance, SolutionRecord& record) {
  for (auto& day : record.days) {
    for (RouteRecord& r : day) r.load = delivery_sum(r);
  }
  const InventoryTrace trace = simulate_inventory(instance, delivered_by_day(instance, record));
  record.inventory = trace.retailer;
  record.stockout = trace.stockout;
  record.supplier_inventory = trace.supplier;
}

Solution to_solution(const Instance& instance, const SolutionRecord& record) {
  Solution s = Solution::empty(instance);
  if (record.days.size() != s.routes.size()) throw std::invalid_argument("day count mismatch");
  for (std::size_t t = 0; t < record.days.size(); ++t) {
    for (const RouteRecord& rr : record.days[t]) {
      std::map<int, int> next;
      for (auto [a, b] : rr.arcs) {
        if (!next.emplace(a, b).second) throw std::invalid_argument(at_day(t) + "node with two successors");
      }
      Route route;
      int cur = next.count(kDepot) ? next.at(kDepot) : -1;
      while (cur != kDepot) {
        if (cur < 1 || cur > instance.num_retailers() || route.size() > rr.arcs.size()) {
          throw std::invalid_argument(at_day(t) + "route is not a closed depot path");
        }
        route.push_back(cur);
        auto it = next.find(cur);
        cur = it == next.end() ? -1 : it->second;
      }
      if (route.size() + 1 != rr.arcs.size()) throw std::invalid_argument(at_day(t) + "route has detached arcs");
      for (auto [i, qty] : rr.deliveries) {
        if (i >= 1 && i <= instance.num_retailers()) s.quantities[t][static_cast<std::size_t>(i)] += qty;
      }
      if (!route.empty()) s.routes[t].push_back(std::move(route));
    }
  }
  return s;
}

std::string write_record(const SolutionRecord& record) {
  json doc;
  doc["instance"] = record.instance;
  doc["omega"] = record.omega;
  json days = json::array();
  for (const auto& day : record.days) {
    json routes = json::array();
    for (const RouteRecord& r : day) {
      json arcs = json::array();
      for (auto [a, b] : r.arcs) arcs.push_back({a, b});
      json dels = json::array();
      for (auto [i, q] : r.deliveries) dels.push_back({i, q});
      routes.push_back({{"vehicle", r.vehicle}, {"arcs", arcs}, {"load", r.load}, {"deliveries", dels}});
    }
    days.push_back(std::move(routes));
  }
  doc["days"] = std::move(days);
  auto rows = [](const std::vector<std::vector<int>>& m) {
    json out = json::array();
    for (std::size_t i = 1; i < m.size(); ++i) out.push_back(m[i]);
    return out;
  };
  doc["inventory"] = rows(record.inventory);
  doc["stockout"] = rows(record.stockout);
  doc["supplier_inventory"] = record.supplier_inventory;
  if (record.cost) doc["cost"] = cost_to_json(*record.cost);
  return doc.dump(1) + "\n";
}

SolutionRecord read_record(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("malformed solution: ") + e.what());
  }
  try {
    SolutionRecord rec;
    rec.instance = doc.value("instance", std::string());
    rec.omega = doc.value("omega", 0.0);
    for (const json& day : doc.at("days")) {
      std::vector<RouteRecord> routes;
      for (const json& rj : day) {
        RouteRecord r;
        r.vehicle = rj.at("vehicle").get<int>();
        r.load = rj.at("load").get<long>();
        for (const json& a : rj.at("arcs")) r.arcs.emplace_back(a.at(0).get<int>(), a.at(1).get<int>());
        for (const json& d : rj.at("deliveries")) r.deliveries.emplace_back(d.at(0).get<int>(), d.at(1).get<int>());
        routes.push_back(std::move(r));
      }
      rec.days.push_back(std::move(routes));
    }
    auto rows = [](const json& j) {
      std::vector<std::vector<int>> m{{}};
      for (const json& row : j) m.push_back(row.get<std::vector<int>>());
      return m;
    };
    rec.inventory = rows(doc.at("inventory"));
    rec.stockout = rows(doc.at("stockout"));
    rec.supplier_inventory = doc.at("supplier_inventory").get<std::vector<long>>();
    if (doc.contains("cost")) rec.cost = cost_from_json(doc.at("cost"));
    return rec;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("invalid solution document: ") + e.what());
  }
}

std::string_view family_name(ConstraintFamily family) {
  switch (family) {
    case ConstraintFamily::kInventoryBalance: return "inventory-balance";
    case ConstraintFamily::kMaxLevel: return "max-level";
    case ConstraintFamily::kVisitDelivery: return "visit-delivery";
    case ConstraintFamily::kVehicleCapacity: return "vehicle-capacity";
    case ConstraintFamily::kSingleVisit: return "single-visit";
    case ConstraintFamily::kRouteFlow: return "route-flow";
    case ConstraintFamily::kLoadSubtour: return "load-subtour";
    case ConstraintFamily::kNonnegativity: return "nonnegativity";
    case ConstraintFamily::kNoStockout: return "no-stockout";
  }
  return "unknown";
}

bool ValidationReport::ok() const {
  return std::all_of(families.begin(), families.end(), [](const FamilyResult& f) { return f.passed; });
}

std::vector<ConstraintFamily> ValidationReport::failed() const {
  std::vector<ConstraintFamily> out;
  for (const FamilyResult& f : families) {
    if (!f.passed) out.push_back(f.family);
  }
  return out;
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  for (const FamilyResult& f : families) {
    os << (f.passed ? "PASS " : "FAIL ") << family_name(f.family);
    if (!f.passed) os << "  " << f.counterexample;
    os << "\n";
  }
  for (const std::string& w : warnings) os << "WARN " << w << "\n";
  return os.str();
}

ValidationReport validate(const Instance& instance, const SolutionRecord& rec) {
  ValidationReport report;
  for (std::size_t k = 0; k < kNumFamilies; ++k) report.families[k].family = static_cast<ConstraintFamily>(k);
  auto fail = [&](ConstraintFamily f, const std::string& why) {
    FamilyResult& r = report.families[static_cast<std::size_t>(f)];
    if (r.passed) {
      r.passed = false;
      r.counterexample = why;
    }
  };

  const int n = instance.num_retailers();
  const auto H = static_cast<std::size_t>(instance.horizon);
  if (rec.days.size() != H) {
    fail(ConstraintFamily::kRouteFlow, "expected " + std::to_string(H) + " days, found " + std::to_string(rec.days.size()));
    return report;
  }
  const bool dims_ok = rec.inventory.size() == static_cast<std::size_t>(n) + 1 &&
                       rec.stockout.size() == static_cast<std::size_t>(n) + 1 && rec.supplier_inventory.size() == H &&
                       std::all_of(rec.inventory.begin() + 1, rec.inventory.end(), [&](const auto& v) { return v.size() == H; }) &&
                       std::all_of(rec.stockout.begin() + 1, rec.stockout.end(), [&](const auto& v) { return v.size() == H; });
  if (!dims_ok) fail(ConstraintFamily::kInventoryBalance, "inventory tables have the wrong shape");

  bool routes_well_formed = true;
  for (std::size_t t = 0; t < H; ++t) {
    std::set<int> vehicles_used;
    std::map<int, int> route_of;  // retailer -> first route index visiting it
    for (std::size_t r = 0; r < rec.days[t].size(); ++r) {
      const RouteRecord& rr = rec.days[t][r];
      const std::string where = at_day(t) + "vehicle " + std::to_string(rr.vehicle) + ": ";
      if (rr.vehicle < 0 || rr.vehicle >= instance.vehicles || !vehicles_used.insert(rr.vehicle).second) {
        fail(ConstraintFamily::kRouteFlow, where + "invalid or repeated vehicle id");
        routes_well_formed = false;
      }

      // Degree / flow conservation (each visited node: one arc in, one arc out).
      std::map<int, int> in, out;
      bool bad_node = false;
      for (auto [a, b] : rr.arcs) {
        if (a < 0 || a > n || b < 0 || b > n || a == b) bad_node = true;
        ++out[a];
        ++in[b];
      }
      if (bad_node) {
        fail(ConstraintFamily::kRouteFlow, where + "arc with unknown node or self-loop");
        routes_well_formed = false;
        continue;
      }
      std::set<int> nodes;
      for (auto [a, b] : rr.arcs) {
        nodes.insert(a);
        nodes.insert(b);
      }
      if (!rr.arcs.empty()) {
        for (int v : nodes) {
          if (in[v] != 1 || out[v] != 1) {
            fail(ConstraintFamily::kRouteFlow, where + "node " + std::to_string(v) + " has in-degree " +
                                                   std::to_string(in[v]) + " and out-degree " + std::to_string(out[v]));
            routes_well_formed = false;
            break;
          }
        }
        if (!nodes.count(kDepot)) {
          fail(ConstraintFamily::kRouteFlow, where + "route does not start at the depot");
          routes_well_formed = false;
        }
      }

      // Connectivity to the depot (subtour elimination).
      if (nodes.count(kDepot)) {
        std::map<int, std::vector<int>> adj;
        for (auto [a, b] : rr.arcs) adj[a].push_back(b);
        std::set<int> seen{kDepot};
        std::vector<int> stack{kDepot};
        while (!stack.empty()) {
          const int v = stack.back();
          stack.pop_back();
          for (int w : adj[v]) {
            if (seen.insert(w).second) stack.push_back(w);
          }
        }
        for (int v : nodes) {
          if (!seen.count(v)) {
            fail(ConstraintFamily::kLoadSubtour, where + "node " + std::to_string(v) + " is not connected to the depot");
            routes_well_formed = false;
            break;
          }
        }
      }

      const long actual = delivery_sum(rr);
      if (rr.load != actual) {
        fail(ConstraintFamily::kLoadSubtour,
             where + "claimed load " + std::to_string(rr.load) + " but deliveries sum to " + std::to_string(actual));
      }
      if (actual > instance.capacity) {
        fail(ConstraintFamily::kVehicleCapacity,
             where + "load " + std::to_string(actual) + " exceeds capacity " + std::to_string(instance.capacity));
      }
      for (auto [i, q] : rr.deliveries) {
        if (i < 1 || i > n) {
          fail(ConstraintFamily::kVisitDelivery, where + "delivery to unknown retailer " + std::to_string(i));
          continue;
        }
        if (q < 0) fail(ConstraintFamily::kNonnegativity, where + "negative quantity to retailer " + std::to_string(i));
        if (q > 0 && !nodes.count(i)) {
          fail(ConstraintFamily::kVisitDelivery,
               where + "retailer " + std::to_string(i) + " receives " + std::to_string(q) + " without a visit");
        }
      }
      for (int v : nodes) {
        if (v == kDepot) continue;
        auto [it, inserted] = route_of.emplace(v, static_cast<int>(r));
        if (!inserted) {
          fail(ConstraintFamily::kSingleVisit, at_day(t) + "retailer " + std::to_string(v) + " visited by two vehicles");
        }
      }
    }
  }

  if (dims_ok) {
    const auto q = delivered_by_day(instance, rec);
    long prev0 = instance.supplier.initial_stock;
    for (std::size_t t = 0; t < H; ++t) {
      long shipped = 0;
      for (int i = 1; i <= n; ++i) shipped += q[t][static_cast<std::size_t>(i)];
      const long expect = prev0 + instance.supplier.production[t] - shipped;
      if (rec.supplier_inventory[t] != expect) {
        fail(ConstraintFamily::kInventoryBalance, at_day(t) + "supplier inventory " +
                                                      std::to_string(rec.supplier_inventory[t]) + ", balance gives " +
                                                      std::to_string(expect));
      }
      if (rec.supplier_inventory[t] < 0) {
        report.warnings.push_back(at_day(t) + "supplier inventory is negative (" +
                                  std::to_string(rec.supplier_inventory[t]) + ")");
      }
      prev0 = rec.supplier_inventory[t];
    }
    for (int i = 1; i <= n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const Retailer& ret = instance.retailer(i);
      long prev = ret.initial_stock;
      for (std::size_t t = 0; t < H; ++t) {
        const int I = rec.inventory[ui][t];
        const int B = rec.stockout[ui][t];
        const int qi = q[t][ui];
        const std::string where = at_day(t) + "retailer " + std::to_string(i) + ": ";
        if (I != prev - ret.demand[t] + qi + B) {
          fail(ConstraintFamily::kInventoryBalance, where + "inventory " + std::to_string(I) + " does not balance");
        }
        if (prev + qi > ret.max_level) {
          fail(ConstraintFamily::kMaxLevel, where + "post-delivery level " + std::to_string(prev + qi) +
                                                " exceeds capacity " + std::to_string(ret.max_level));
        }
        if (I < 0 || B < 0 || B > ret.demand[t]) {
          fail(ConstraintFamily::kNonnegativity, where + "inventory or stock-out out of bounds");
        }
        if (!instance.allows_stockout() && B != 0) {
          fail(ConstraintFamily::kNoStockout, where + "stock-out of " + std::to_string(B) + " units");
        }
        prev = I;
      }
    }
  }

  if (routes_well_formed) {
    try {
      report.cost = evaluate(instance, to_solution(instance, rec), rec.omega);
    } catch (const std::invalid_argument&) {
    }
  }
  return report;
}

}  // namespace irp
