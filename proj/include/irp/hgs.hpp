#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "irp/instance.hpp"
#include "irp/local_search.hpp"
#include "irp/solution.hpp"

namespace irp {

struct SearchParams {
  long max_iterations = 100000;
  long max_stagnation = 10000;
  // Seconds; unset means 2400, or 7200 when n >= 50 and H >= 6.
  std::optional<double> time_limit;

  std::optional<double> initial_omega;  // unset: derived from the instance
  double omega_min = 0.01;
  double omega_max = 1e6;
  double omega_increase = 1.2;
  double omega_decrease = 0.85;
  double target_feasible_low = 0.2;
  double target_feasible_high = 0.25;
  int penalty_window = 100;

  int mu = 25;
  int lambda = 40;
  double elite_fraction = 0.4;
  int n_closest = 3;
  int initial_population_factor = 4;  // initial population = factor * mu
  double repair_probability = 0.5;
  double diversify_fraction = 2.0 / 3.0;
  long diversify_after = 0;  // 0: max_stagnation / 3
  double extra_visit_probability = 0.3;

  std::uint64_t seed = 1;
  LocalSearchParams local_search;
  const PieceSink* pieces = nullptr;
  std::ostream* log = nullptr;
  long log_every = 500;

  double resolved_time_limit(const Instance& instance) const;
};

struct Individual {
  Solution solution;
  CostBreakdown cost;        // at the omega used when it was evaluated
  double penalized = 0.0;    // objective + current omega * excess
  bool feasible = false;
  std::vector<std::uint64_t> pattern;  // delivery-day bitset per retailer
  double fitness = 0.0;
  // Maintained by the owning subpopulation: (distance, id) to every other
  // member, ascending.
  std::uint64_t id = 0;
  std::vector<std::pair<double, std::uint64_t>> proximity;
};

// One bitset of delivery days per retailer, ceil(H / 64) words each.
std::vector<std::uint64_t> delivery_pattern(const Solution& solution, int retailers);

// Fraction of retailers whose sets of delivery days differ.
double distance(const Individual& a, const Individual& b);
double distance(const Solution& a, const Solution& b);

class Subpopulation {
 public:
  explicit Subpopulation(const SearchParams& params) : params_(&params) {}

  void add(std::unique_ptr<Individual> ind);
  void update_fitness();
  // Trims down to mu: clones first, then worst biased fitness. The best-cost
  // member is never removed.
  void survivor_selection();
  void remove_worst(std::size_t count);
  void reprice(double omega);

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const Individual& operator[](std::size_t k) const { return *members_[k]; }
  Individual& operator[](std::size_t k) { return *members_[k]; }

 private:
  void remove_one(bool clones_only_pass);
  void erase(std::size_t k);
  bool is_clone(std::size_t k) const;
  double diversity_contribution(std::size_t k) const;

  const SearchParams* params_;
  std::vector<std::unique_ptr<Individual>> members_;  // sorted by penalized cost
  std::uint64_t next_id_ = 0;
};

struct Population {
  explicit Population(const SearchParams& params) : feasible(params), infeasible(params) {}
  Subpopulation feasible;
  Subpopulation infeasible;
  std::size_t size() const { return feasible.size() + infeasible.size(); }
  const Individual& at(std::size_t k) const { return k < feasible.size() ? feasible[k] : infeasible[k - feasible.size()]; }
};

// Binary tournament on biased fitness over both subpopulations. Throws
// std::logic_error on an empty population.
std::pair<const Individual*, const Individual*> select_parents(Population& population, Rng& rng);

// Just-in-time visits, order-up-to quantities, random extra visits, random
// daily order and split. Not educated.
Solution initial_solution(const Instance& instance, double omega, double extra_visit_probability, Rng& rng);

// Multi-day crossover, split included, education not.
Solution crossover(const Instance& instance, const Solution& p1, const Solution& p2, double omega, Rng& rng);

// Scales omega from the fraction of naturally feasible recent offspring.
double adapt_penalty(const SearchParams& params, double omega, double feasible_fraction);

double default_initial_omega(const Instance& instance);

struct SearchResult {
  Solution best;
  CostBreakdown cost;
  bool feasible = false;
  long iterations = 0;
  double seconds = 0.0;
  double final_omega = 0.0;
  std::vector<std::pair<long, double>> improvements;  // (iteration, best feasible objective)
  LocalSearchStats local_search;
};

SearchResult run(const Instance& instance, const SearchParams& params);

}  // namespace irp
