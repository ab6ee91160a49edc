#pragma once

#include <functional>
#include <string>
#include <vector>

#include "irp/solution_io.hpp"

namespace irp::testing_util {

// Two vehicles of capacity 10 over two days. Retailer 1 can hold more than a
// vehicle, retailer 2 less; retailer 3 is never visited and well stocked.
inline Instance mutation_instance() {
  Instance inst;
  inst.name = "mutation-base";
  inst.horizon = 2;
  inst.vehicles = 2;
  inst.capacity = 10;
  inst.supplier.initial_stock = 40;
  inst.supplier.production = {5, 5};
  inst.supplier.holding_cost = {0.1, 0.1};
  const std::vector<Point> pts{{0, 0}, {4, 0}, {4, 3}, {0, 5}, {-3, 0}};
  const int U[] = {15, 5, 10, 10};
  const int I0[] = {0, 0, 8, 0};
  const std::vector<int> d[] = {{5, 5}, {3, 2}, {2, 2}, {4, 4}};
  for (int k = 0; k < 4; ++k) {
    Retailer r;
    r.location = pts[static_cast<std::size_t>(k) + 1];
    r.max_level = U[k];
    r.initial_stock = I0[k];
    r.demand = d[k];
    r.holding_cost = 1;
    inst.retailers.push_back(r);
  }
  inst.cost = build_cost_matrix(pts, CostRounding::kNearestInteger);
  inst.validate();
  return inst;
}

inline Solution mutation_solution(const Instance& inst) {
  Solution s = Solution::empty(inst);
  s.routes[0] = {{1, 2}, {4}};
  s.routes[1] = {{1}, {4, 2}};
  s.quantities[0] = {0, 5, 3, 0, 4};
  s.quantities[1] = {0, 5, 2, 0, 4};
  return s;
}

struct Mutation {
  std::string name;
  ConstraintFamily family;
  std::function<void(SolutionRecord&)> apply;
  bool refresh;  // recompute claimed loads and inventories afterwards
};

inline void set_delivery(RouteRecord& r, int retailer, int q) {
  for (auto& [i, qty] : r.deliveries) {
    if (i == retailer) qty = q;
  }
}

inline std::vector<Mutation> mutations() {
  using F = ConstraintFamily;
  return {
      {"capacity", F::kVehicleCapacity, [](SolutionRecord& r) { set_delivery(r.days[0][0], 1, 12); }, true},
      {"max-level", F::kMaxLevel, [](SolutionRecord& r) { set_delivery(r.days[1][1], 2, 6); }, true},
      {"cross-route duplicate visit", F::kSingleVisit,
       [](SolutionRecord& r) {
         r.days[0][0].arcs = {{0, 1}, {1, 2}, {2, 4}, {4, 0}};
         r.days[0][0].deliveries.emplace_back(4, 0);
       },
       true},
      {"retailer inventory balance", F::kInventoryBalance, [](SolutionRecord& r) { --r.inventory[3][0]; }, false},
      {"supplier inventory balance", F::kInventoryBalance, [](SolutionRecord& r) { ++r.supplier_inventory[0]; }, false},
      {"subtour", F::kLoadSubtour,
       [](SolutionRecord& r) { r.days[0][0].arcs = {{0, 1}, {1, 0}, {2, 3}, {3, 2}}; }, true},
      {"quantity without visit", F::kVisitDelivery,
       [](SolutionRecord& r) { r.days[0][1].deliveries.emplace_back(3, 1); }, true},
      {"route not closed", F::kRouteFlow, [](SolutionRecord& r) { r.days[0][1].arcs.pop_back(); }, true},
      {"load claim", F::kLoadSubtour, [](SolutionRecord& r) { ++r.days[1][0].load; }, false},
      {"negative quantity", F::kNonnegativity,
       [](SolutionRecord& r) {
         r.days[0][1].arcs = {{0, 4}, {4, 3}, {3, 0}};
         r.days[0][1].deliveries.emplace_back(3, -1);
       },
       true},
      {"forbidden stock-out", F::kNoStockout, [](SolutionRecord& r) { r.days[0].pop_back(); }, true},
  };
}

}  // namespace irp::testing_util
