#include "irp/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace irp {
namespace {

struct Slot {
  int route = kNewRoute;
  int position = 0;
};

void insert_visit(Solution& s, int day, int retailer, const Slot& slot, int quantity) {
  auto& routes = s.routes[static_cast<std::size_t>(day)];
  if (slot.route == kNewRoute) {
    routes.push_back({retailer});
  } else {
    Route& r = routes[static_cast<std::size_t>(slot.route)];
    r.insert(r.begin() + slot.position, retailer);
  }
  s.quantities[static_cast<std::size_t>(day)][static_cast<std::size_t>(retailer)] = quantity;
}

std::uint64_t checked_power(std::uint64_t base, int exp, std::uint64_t limit) {
  std::uint64_t v = 1;
  for (int k = 0; k < exp; ++k) {
    if (v > limit / base) return limit + 1;
    v *= base;
  }
  return v;
}

// Advances a mixed-radix counter; false once every digit has wrapped.
bool next_vector(std::vector<int>& digits, const std::vector<int>& radix_max) {
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (digits[k] < radix_max[k]) {
      ++digits[k];
      return true;
    }
    digits[k] = 0;
  }
  return false;
}

class Deadline {
 public:
  explicit Deadline(double seconds)
      : end_(std::chrono::steady_clock::now() +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds))) {}
  void check() const {
    if (std::chrono::steady_clock::now() > end_) throw BudgetExceeded("enumeration time cap reached");
  }

 private:
  std::chrono::steady_clock::time_point end_;
};

}  // namespace

OracleResult brute_force_reinsertion(const Instance& instance, const Solution& reduced, int retailer,
                                     double omega, bool allow_stockout, const EnumerationBudget& budget) {
  const Retailer& r = instance.retailer(retailer);
  const int H = instance.horizon;
  const int U = r.max_level;
  OracleResult out;
  out.expected = checked_power(static_cast<std::uint64_t>(U) + 1, H, budget.max_states);
  if (out.expected > budget.max_states) throw BudgetExceeded("quantity grid exceeds the state budget");
  const Deadline deadline(budget.max_seconds);
  const bool soa = allow_stockout && instance.allows_stockout();

  // Cheapest slot for every (day, quantity); days are independent given q.
  const double base = cost_without_retailer(instance, reduced, omega, retailer);
  std::vector<std::vector<Slot>> slot(static_cast<std::size_t>(H), std::vector<Slot>(static_cast<std::size_t>(U) + 1));
  for (int t = 0; t < H; ++t) {
    const auto& routes = reduced.routes[static_cast<std::size_t>(t)];
    std::vector<Slot> candidates;
    for (std::size_t k = 0; k < routes.size(); ++k) {
      for (std::size_t p = 0; p <= routes[k].size(); ++p) candidates.push_back({static_cast<int>(k), static_cast<int>(p)});
    }
    if (static_cast<int>(routes.size()) < instance.vehicles) candidates.push_back({kNewRoute, 0});
    for (int q = 1; q <= U; ++q) {
      double best = std::numeric_limits<double>::infinity();
      for (const Slot& c : candidates) {
        Solution s = reduced;
        insert_visit(s, t, retailer, c, q);
        const double v = cost_without_retailer(instance, s, omega, retailer) - base;
        if (v < best) {
          best = v;
          slot[static_cast<std::size_t>(t)][static_cast<std::size_t>(q)] = c;
        }
      }
    }
  }

  out.schedule.fingerprint = fingerprint(reduced);
  out.schedule.feasible = false;
  out.schedule.cost = std::numeric_limits<double>::infinity();
  std::vector<int> q(static_cast<std::size_t>(H), 0);
  const std::vector<int> qmax(static_cast<std::size_t>(H), U);
  const double reduced_total = base;
  do {
    ++out.enumerated;
    if ((out.enumerated & 1023U) == 0) deadline.check();
    bool ok = true;
    int level = r.initial_stock;
    for (int t = 0; t < H && ok; ++t) {
      const int qt = q[static_cast<std::size_t>(t)];
      if (level + qt > U) ok = false;
      const int net = level + qt - r.demand[static_cast<std::size_t>(t)];
      if (net < 0 && !soa) ok = false;
      level = std::max(0, net);
    }
    if (!ok) continue;
    Solution s = reduced;
    for (int t = 0; t < H; ++t) {
      const int qt = q[static_cast<std::size_t>(t)];
      if (qt > 0) insert_visit(s, t, retailer, slot[static_cast<std::size_t>(t)][static_cast<std::size_t>(qt)], qt);
    }
    // The retailer's own term is added separately so that stock-outs of other
    // retailers (infinite in no-stock-out mode) cancel out of the delta.
    const double cost = cost_without_retailer(instance, s, omega, retailer) - reduced_total +
                        retailer_inventory_cost(instance, retailer, q);
    if (cost < out.schedule.cost) {
      out.schedule.cost = cost;
      out.schedule.feasible = true;
      out.schedule.days.assign(static_cast<std::size_t>(H), {});
      for (int t = 0; t < H; ++t) {
        const int qt = q[static_cast<std::size_t>(t)];
        if (qt == 0) continue;
        const Slot& sl = slot[static_cast<std::size_t>(t)][static_cast<std::size_t>(qt)];
        out.schedule.days[static_cast<std::size_t>(t)] = {true, qt, sl.route, sl.position};
      }
    }
  } while (next_vector(q, qmax));
  return out;
}

ExhaustiveResult exhaustive_solve(const Instance& instance, const EnumerationBudget& budget) {
  const int n = instance.num_retailers();
  const int H = instance.horizon;
  if (n > 3 || H > 2 || instance.vehicles != 1) throw BudgetExceeded("instance too large for exhaustive_solve");
  std::uint64_t states = 1;
  std::vector<int> qmax;
  for (int t = 0; t < H; ++t) {
    for (int i = 1; i <= n; ++i) {
      const int U = instance.retailer(i).max_level;
      if (U > 5) throw BudgetExceeded("max level above 5");
      qmax.push_back(U);
      states *= static_cast<std::uint64_t>(U) + 1;
    }
  }
  if (states > budget.max_states) throw BudgetExceeded("quantity grid exceeds the state budget");
  const Deadline deadline(budget.max_seconds);

  // Cheapest visiting order for every subset of retailers.
  std::vector<Route> best_order(std::size_t{1} << n);
  for (unsigned mask = 1; mask < best_order.size(); ++mask) {
    Route perm;
    for (int i = 1; i <= n; ++i) {
      if (mask & (1U << (i - 1))) perm.push_back(i);
    }
    Route best = perm;
    double best_cost = route_distance(instance, perm);
    while (std::next_permutation(perm.begin(), perm.end())) {
      const double c = route_distance(instance, perm);
      if (c < best_cost) {
        best_cost = c;
        best = perm;
      }
    }
    best_order[mask] = best;
  }

  ExhaustiveResult out;
  out.cost.total = std::numeric_limits<double>::infinity();
  std::vector<int> digits(qmax.size(), 0);
  do {
    ++out.enumerated;
    if ((out.enumerated & 1023U) == 0) deadline.check();
    Solution s = Solution::empty(instance);
    bool ok = true;
    for (int t = 0; t < H && ok; ++t) {
      unsigned mask = 0;
      long load = 0;
      for (int i = 1; i <= n; ++i) {
        const int q = digits[static_cast<std::size_t>(t * n + i - 1)];
        s.quantities[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = q;
        load += q;
        if (q > 0) mask |= 1U << (i - 1);
      }
      if (load > instance.capacity) ok = false;
      if (mask) s.routes[static_cast<std::size_t>(t)].push_back(best_order[mask]);
    }
    if (!ok) continue;
    // Max-level caps under the lost-sales inventory recursion.
    const InventoryTrace trace = simulate_inventory(instance, s.quantities);
    for (int i = 1; i <= n && ok; ++i) {
      int prev = instance.retailer(i).initial_stock;
      for (int t = 0; t < H && ok; ++t) {
        if (prev + s.quantities[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] > instance.retailer(i).max_level) ok = false;
        prev = trace.retailer[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
      }
    }
    if (!ok) continue;
    const CostBreakdown c = evaluate(instance, s, 0.0);
    if (c.total < out.cost.total) {
      out.cost = c;
      out.solution = std::move(s);
      out.feasible = true;
    }
  } while (next_vector(digits, qmax));
  return out;
}

}  // namespace irp
