#pragma once

#include <span>
#include <vector>

#include "irp/instance.hpp"

namespace irp {

using Route = std::vector<int>;  // retailer ids in visiting order, depot implicit at both ends

// One day's giant tour is the concatenation of that day's routes; the route
// list is the decoded form and is what every operator manipulates. Routes
// are never empty.
struct Solution {
  std::vector<std::vector<Route>> routes;      // routes[day][r]
  std::vector<std::vector<int>> quantities;    // quantities[day][node], node 0 unused

  static Solution empty(const Instance& instance);

  int horizon() const { return static_cast<int>(routes.size()); }
  std::vector<int> giant_tour(int day) const;
  int route_load(int day, std::size_t r) const;
  bool visits(int day, int retailer) const;
  // Drops routes that became empty.
  void normalize();

  bool operator==(const Solution&) const = default;
};

struct CostBreakdown {
  double supplier_holding = 0.0;
  double retailer_holding = 0.0;
  double stockout_penalty = 0.0;
  double routing = 0.0;
  double capacity_excess_penalty = 0.0;
  double total = 0.0;

  long capacity_excess = 0;    // sum over routes of max(0, load - Q)
  long stockout_quantity = 0;  // sum of B
  long delivered_quantity = 0; // sum of q

  bool capacity_feasible() const { return capacity_excess == 0; }
  double inventory() const { return supplier_holding + retailer_holding; }
  // Objective without the capacity penalty.
  double objective() const { return total - capacity_excess_penalty; }
};

struct InventoryTrace {
  std::vector<std::vector<int>> retailer;  // I[i][day], index 0 unused
  std::vector<std::vector<int>> stockout;  // B[i][day], index 0 unused
  std::vector<long> supplier;              // I0[day]
};

InventoryTrace simulate_inventory(const Instance& instance,
                                  const std::vector<std::vector<int>>& quantities);

CostBreakdown evaluate(const Instance& instance, const Solution& solution, double omega);

// evaluate(...).total leaving out the holding and stock-out cost of one
// retailer. Finite even when that retailer has a forbidden stock-out.
double cost_without_retailer(const Instance& instance, const Solution& solution, double omega, int retailer);

// Holding plus stock-out cost of one retailer under the given per-day
// deliveries (quantities[day]). Infinite when a forbidden stock-out occurs.
double retailer_inventory_cost(const Instance& instance, int retailer,
                               std::span<const int> quantities);

// Arc cost of 0 -> route -> 0.
double route_distance(const Instance& instance, const Route& route);

// Partition `tour` into at most instance.vehicles consecutive routes
// minimizing routing cost plus omega times capacity excess. Throws
// std::invalid_argument for unknown retailers. `quantities` is indexed by node.
std::vector<Route> split_day(const Instance& instance, std::span<const int> tour,
                             std::span<const int> quantities, double omega);

}  // namespace irp
