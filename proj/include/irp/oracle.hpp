#pragma once

#include <cstdint>
#include <stdexcept>

#include "irp/ds_operator.hpp"
#include "irp/instance.hpp"
#include "irp/solution.hpp"

namespace irp {

// Limits checked before any enumeration starts.
struct EnumerationBudget {
  std::uint64_t max_states = 5'000'000;
  double max_seconds = 60.0;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  Schedule schedule;
  std::uint64_t enumerated = 0;  // quantity vectors visited, feasible or not
  std::uint64_t expected = 0;    // closed-form count (U + 1)^H
};

// Exhaustive minimum over every delivery-day subset, integer quantity vector
// within the max-level caps and insertion position (plus a new route when a
// vehicle is free). Costs come from evaluate() on materialized solutions.
OracleResult brute_force_reinsertion(const Instance& instance, const Solution& reduced, int retailer,
                                     double omega, bool allow_stockout, const EnumerationBudget& budget = {});

struct ExhaustiveResult {
  Solution solution;
  CostBreakdown cost;
  bool feasible = false;
  std::uint64_t enumerated = 0;
};

// Global optimum of tiny single-vehicle instances (n <= 3, H <= 2, U <= 5)
// with capacity treated as a hard limit.
ExhaustiveResult exhaustive_solve(const Instance& instance, const EnumerationBudget& budget = {});

}  // namespace irp
