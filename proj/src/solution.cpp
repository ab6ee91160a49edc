#include "irp/solution.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace irp {

Solution Solution::empty(const Instance& instance) {
  Solution s;
  s.routes.assign(static_cast<std::size_t>(instance.horizon), {});
  s.quantities.assign(static_cast<std::size_t>(instance.horizon),
                      std::vector<int>(static_cast<std::size_t>(instance.num_nodes()), 0));
  return s;
}

std::vector<int> Solution::giant_tour(int day) const {
  std::vector<int> tour;
  for (const Route& r : routes[static_cast<std::size_t>(day)]) tour.insert(tour.end(), r.begin(), r.end());
  return tour;
}

int Solution::route_load(int day, std::size_t r) const {
  const auto& q = quantities[static_cast<std::size_t>(day)];
  int load = 0;
  for (int v : routes[static_cast<std::size_t>(day)][r]) load += q[static_cast<std::size_t>(v)];
  return load;
}

bool Solution::visits(int day, int retailer) const {
  for (const Route& r : routes[static_cast<std::size_t>(day)]) {
    if (std::find(r.begin(), r.end(), retailer) != r.end()) return true;
  }
  return false;
}

void Solution::normalize() {
  for (auto& day : routes) {
    day.erase(std::remove_if(day.begin(), day.end(), [](const Route& r) { return r.empty(); }), day.end());
  }
}

InventoryTrace simulate_inventory(const Instance& instance,
                                  const std::vector<std::vector<int>>& quantities) {
  const int n = instance.num_retailers();
  const auto H = static_cast<std::size_t>(instance.horizon);
  InventoryTrace trace;
  trace.retailer.assign(static_cast<std::size_t>(n) + 1, std::vector<int>(H, 0));
  trace.stockout.assign(static_cast<std::size_t>(n) + 1, std::vector<int>(H, 0));
  trace.supplier.assign(H, 0);

  long stock0 = instance.supplier.initial_stock;
  for (std::size_t t = 0; t < H; ++t) {
    stock0 += instance.supplier.production[t];
    for (int i = 1; i <= n; ++i) stock0 -= quantities[t][static_cast<std::size_t>(i)];
    trace.supplier[t] = stock0;
  }
  for (int i = 1; i <= n; ++i) {
    const Retailer& r = instance.retailer(i);
    int level = r.initial_stock;
    for (std::size_t t = 0; t < H; ++t) {
      const int net = level + quantities[t][static_cast<std::size_t>(i)] - r.demand[t];
      level = std::max(0, net);
      trace.retailer[static_cast<std::size_t>(i)][t] = level;
      trace.stockout[static_cast<std::size_t>(i)][t] = std::max(0, -net);
    }
  }
  return trace;
}

double retailer_inventory_cost(const Instance& instance, int retailer,
                               std::span<const int> quantities) {
  const Retailer& r = instance.retailer(retailer);
  double cost = 0.0;
  int level = r.initial_stock;
  for (std::size_t t = 0; t < quantities.size(); ++t) {
    const int net = level + quantities[t] - r.demand[t];
    level = std::max(0, net);
    cost += r.holding_cost * level;
    if (net < 0) {
      if (!instance.allows_stockout()) return kNoStockout;
      cost += instance.stockout_factor * r.holding_cost * (-net);
    }
  }
  return cost;
}

double route_distance(const Instance& instance, const Route& route) {
  if (route.empty()) return 0.0;
  double d = instance.cost(kDepot, route.front()) + instance.cost(route.back(), kDepot);
  for (std::size_t k = 1; k < route.size(); ++k) d += instance.cost(route[k - 1], route[k]);
  return d;
}

namespace {

CostBreakdown evaluate_skipping(const Instance& instance, const Solution& solution, double omega, int skip) {
  CostBreakdown c;
  const InventoryTrace trace = simulate_inventory(instance, solution.quantities);
  for (int t = 0; t < instance.horizon; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    c.supplier_holding += instance.supplier.holding_cost[ut] * static_cast<double>(trace.supplier[ut]);
    for (int i = 1; i <= instance.num_retailers(); ++i) {
      const auto ui = static_cast<std::size_t>(i);
      c.delivered_quantity += solution.quantities[ut][ui];
      if (i == skip) continue;
      const double h = instance.retailer(i).holding_cost;
      c.retailer_holding += h * trace.retailer[ui][ut];
      const int b = trace.stockout[ui][ut];
      c.stockout_quantity += b;
      // Guarded so that a forbidden stock-out of zero units never yields 0 * inf.
      if (b > 0) c.stockout_penalty += instance.stockout_factor * h * b;
    }
    for (std::size_t r = 0; r < solution.routes[ut].size(); ++r) {
      c.routing += route_distance(instance, solution.routes[ut][r]);
      c.capacity_excess += std::max(0, solution.route_load(t, r) - instance.capacity);
    }
  }
  c.capacity_excess_penalty = c.capacity_excess > 0 ? omega * static_cast<double>(c.capacity_excess) : 0.0;
  c.total = c.supplier_holding + c.retailer_holding + c.stockout_penalty + c.routing +
            c.capacity_excess_penalty;
  return c;
}

}  // namespace

CostBreakdown evaluate(const Instance& instance, const Solution& solution, double omega) {
  return evaluate_skipping(instance, solution, omega, 0);
}

double cost_without_retailer(const Instance& instance, const Solution& solution, double omega, int retailer) {
  return evaluate_skipping(instance, solution, omega, retailer).total;
}

std::vector<Route> split_day(const Instance& instance, std::span<const int> tour,
                             std::span<const int> quantities, double omega) {
  const int n = instance.num_retailers();
  for (int v : tour) {
    if (v < 1 || v > n) throw std::invalid_argument("split_day: unknown retailer " + std::to_string(v));
  }
  const std::size_t L = tour.size();
  if (L == 0) return {};
  const std::size_t K = std::min<std::size_t>(static_cast<std::size_t>(instance.vehicles), L);
  const double inf = std::numeric_limits<double>::infinity();
  const auto& c = instance.cost;

  // best[k][j]: cheapest cover of tour[0, j) with exactly k routes.
  std::vector<std::vector<double>> best(K + 1, std::vector<double>(L + 1, inf));
  std::vector<std::vector<std::size_t>> pred(K + 1, std::vector<std::size_t>(L + 1, 0));
  best[0][0] = 0.0;
  for (std::size_t k = 1; k <= K; ++k) {
    for (std::size_t i = k - 1; i < L; ++i) {
      if (best[k - 1][i] == inf) continue;
      double dist = 0.0;
      long load = 0;
      for (std::size_t j = i; j < L; ++j) {
        load += quantities[static_cast<std::size_t>(tour[j])];
        dist += j == i ? c(kDepot, tour[j]) : c(tour[j - 1], tour[j]);
        const double excess = static_cast<double>(std::max<long>(0, load - instance.capacity));
        const double cost = best[k - 1][i] + dist + c(tour[j], kDepot) + (excess > 0 ? omega * excess : 0.0);
        if (cost < best[k][j + 1]) {
          best[k][j + 1] = cost;
          pred[k][j + 1] = i;
        }
      }
    }
  }
  std::size_t k_best = 1;
  for (std::size_t k = 2; k <= K; ++k) {
    if (best[k][L] < best[k_best][L]) k_best = k;
  }
  std::vector<Route> routes(k_best);
  std::size_t j = L;
  for (std::size_t k = k_best; k >= 1; --k) {
    const std::size_t i = pred[k][j];
    routes[k - 1].assign(tour.begin() + static_cast<std::ptrdiff_t>(i), tour.begin() + static_cast<std::ptrdiff_t>(j));
    j = i;
  }
  return routes;
}

}  // namespace irp
