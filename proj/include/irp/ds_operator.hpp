#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "irp/instance.hpp"
#include "irp/plf.hpp"
#include "irp/solution.hpp"

namespace irp {

inline constexpr int kNewRoute = -1;

struct InsertionOption {
  double residual = 0.0;  // kappa: capacity left before excess is charged
  double detour = 0.0;    // gamma: cheapest insertion detour
  int route = kNewRoute;  // index into the day's routes, or kNewRoute
  int position = 0;       // insert before this index of the route
};

// Non-dominated options of one day, sorted by increasing detour, and the
// induced delivery cost F(q) = min_k(detour_k + omega * max(0, q - residual_k))
// on q in [1, U].
struct InsertionOptions {
  std::vector<InsertionOption> options;
  double omega = 0.0;
  PiecewiseLinear cost;

  double evaluate(int q) const;
  // Index of the option attaining evaluate(q); the first one on ties.
  std::size_t best_option(int q) const;
};

InsertionOptions build_insertion_options(const Instance& instance, const Solution& reduced, int retailer,
                                         double omega, int day);

// Removes every visit of `retailer`; routes left empty are deleted.
Solution remove_retailer(const Solution& solution, int retailer);

struct ScheduleDay {
  bool deliver = false;
  int quantity = 0;
  int route = kNewRoute;
  int position = 0;
};

struct Schedule {
  std::vector<ScheduleDay> days;
  // Retailer holding + stock-out cost + detours and excess penalty - supplier
  // credit. evaluate(apply(reduced)).total equals the reduced objective
  // without the retailer's own inventory term, plus this cost.
  double cost = 0.0;
  bool feasible = true;
  std::uint64_t fingerprint = 0;
};

// Dynamic-programming states kept for inspection and backtracking.
struct CostToGo {
  std::vector<PiecewiseLinear> C;       // C[0] is the initial point, C[t + 1] after day t
  std::vector<PiecewiseLinear> f1;      // no-delivery branch per day
  std::vector<PiecewiseLinear> c_hat;   // combined branch per day, before the stock-out fold
  std::vector<InsertionOptions> options;
};

std::uint64_t fingerprint(const Solution& solution);

Schedule dp_reinsertion(const Instance& instance, const Solution& reduced, int retailer, double omega,
                        bool allow_stockout, CostToGo* states = nullptr);

// Throws std::logic_error for a stale schedule or a new route on a full day.
void apply_schedule(const Instance& instance, Solution& reduced, int retailer, const Schedule& schedule);

// Piece counts of C_t for every day t (C[1..H]).
std::vector<std::size_t> piece_count_probe(const CostToGo& states);

// Checks on DS applications collected when verification is enabled.
struct DsAudit {
  long applications = 0;
  long worsened = 0;
  double max_prediction_error = 0.0;
};

using PieceSink = std::function<void(int day, int retailer, std::size_t pieces)>;

struct DsOptions {
  DsAudit* audit = nullptr;     // non-null enables from-scratch verification
  const PieceSink* pieces = nullptr;
};

// Remove, re-optimize and reinsert one retailer. Returns true when the
// solution changed (strict improvement of the penalized objective).
bool improve_retailer(const Instance& instance, Solution& solution, int retailer, double omega,
                      const DsOptions& options = {});

}  // namespace irp
