#include "irp/hgs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace irp {
namespace {

std::size_t words_per_retailer(int horizon) { return static_cast<std::size_t>((horizon + 63) / 64); }

double penalized_cost(const CostBreakdown& c, double omega) {
  return c.objective() + omega * static_cast<double>(c.capacity_excess);
}

std::unique_ptr<Individual> make_individual(const Instance& inst, Solution s, double omega) {
  auto ind = std::make_unique<Individual>();
  ind->cost = evaluate(inst, s, omega);
  ind->penalized = penalized_cost(ind->cost, omega);
  ind->feasible = ind->cost.capacity_feasible() && std::isfinite(ind->cost.total);
  ind->pattern = delivery_pattern(s, inst.num_retailers());
  ind->solution = std::move(s);
  return ind;
}

// Chronological pass enforcing the max level: q <= U - I_prev, zero
// quantities dropped from the visiting order.
void cap_quantities(const Instance& inst, std::vector<std::vector<int>>& tours, Solution& s) {
  const int n = inst.num_retailers();
  std::vector<int> level(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) level[static_cast<std::size_t>(i)] = inst.retailer(i).initial_stock;
  for (int t = 0; t < inst.horizon; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    auto& q = s.quantities[ut];
    auto& tour = tours[ut];
    std::erase_if(tour, [&](int i) {
      const auto ui = static_cast<std::size_t>(i);
      q[ui] = std::min(q[ui], inst.retailer(i).max_level - level[ui]);
      if (q[ui] <= 0) {
        q[ui] = 0;
        return true;
      }
      return false;
    });
    for (int i = 1; i <= n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      level[ui] = std::max(0, level[ui] + q[ui] - inst.retailer(i).demand[ut]);
    }
  }
}

void split_all(const Instance& inst, const std::vector<std::vector<int>>& tours, Solution& s, double omega) {
  for (int t = 0; t < inst.horizon; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    s.routes[ut] = split_day(inst, tours[ut], s.quantities[ut], omega);
  }
}

}  // namespace

std::vector<std::uint64_t> delivery_pattern(const Solution& s, int n) {
  const std::size_t w = words_per_retailer(s.horizon());
  std::vector<std::uint64_t> bits(static_cast<std::size_t>(n) * w, 0);
  for (int t = 0; t < s.horizon(); ++t) {
    const auto& q = s.quantities[static_cast<std::size_t>(t)];
    for (int i = 1; i <= n; ++i) {
      if (q[static_cast<std::size_t>(i)] > 0) {
        bits[static_cast<std::size_t>(i - 1) * w + static_cast<std::size_t>(t / 64)] |= std::uint64_t{1} << (t % 64);
      }
    }
  }
  return bits;
}

double SearchParams::resolved_time_limit(const Instance& instance) const {
  if (time_limit) return *time_limit;
  return instance.num_retailers() >= 50 && instance.horizon >= 6 ? 7200.0 : 2400.0;
}

namespace {

double pattern_distance(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b, int horizon) {
  if (a.size() != b.size()) throw std::invalid_argument("patterns of different shape");
  const std::size_t words = words_per_retailer(horizon);
  const std::size_t n = words == 0 ? 0 : a.size() / words;
  if (n == 0) return 0.0;
  std::size_t differ = 0;
  for (std::size_t k = 0; k < a.size(); k += words) {
    differ += std::equal(a.begin() + static_cast<long>(k), a.begin() + static_cast<long>(k + words),
                         b.begin() + static_cast<long>(k))
                  ? 0
                  : 1;
  }
  return static_cast<double>(differ) / static_cast<double>(n);
}

}  // namespace

double distance(const Individual& a, const Individual& b) {
  return pattern_distance(a.pattern, b.pattern, a.solution.horizon());
}

double distance(const Solution& a, const Solution& b) {
  const int n = a.quantities.empty() ? 0 : static_cast<int>(a.quantities[0].size()) - 1;
  if (n <= 0) return 0.0;
  return pattern_distance(delivery_pattern(a, n), delivery_pattern(b, n), a.horizon());
}

void Subpopulation::add(std::unique_ptr<Individual> ind) {
  ind->id = next_id_++;
  ind->proximity.clear();
  const auto closer = [](const std::pair<double, std::uint64_t>& x, const std::pair<double, std::uint64_t>& y) {
    return x < y;
  };
  for (auto& m : members_) {
    const double d = distance(*ind, *m);
    const std::pair<double, std::uint64_t> to_new{d, ind->id};
    m->proximity.insert(std::upper_bound(m->proximity.begin(), m->proximity.end(), to_new, closer), to_new);
    ind->proximity.emplace_back(d, m->id);
  }
  std::sort(ind->proximity.begin(), ind->proximity.end());
  auto pos = std::upper_bound(members_.begin(), members_.end(), ind->penalized,
                              [](double v, const std::unique_ptr<Individual>& m) { return v < m->penalized; });
  members_.insert(pos, std::move(ind));
}

void Subpopulation::erase(std::size_t k) {
  const std::uint64_t id = members_[k]->id;
  members_.erase(members_.begin() + static_cast<long>(k));
  for (auto& m : members_) {
    std::erase_if(m->proximity, [id](const auto& p) { return p.second == id; });
  }
}

bool Subpopulation::is_clone(std::size_t k) const {
  const Individual& a = *members_[k];
  for (const auto& [d, id] : a.proximity) {
    if (d > 0.0) break;
    for (const auto& m : members_) {
      if (m->id == id && std::abs(m->penalized - a.penalized) <= 1e-9 * std::max(1.0, std::abs(a.penalized))) return true;
    }
  }
  return false;
}

double Subpopulation::diversity_contribution(std::size_t k) const {
  const auto& prox = members_[k]->proximity;
  if (prox.empty()) return 0.0;
  const std::size_t c = std::min(prox.size(), static_cast<std::size_t>(std::max(1, params_->n_closest)));
  double sum = 0.0;
  for (std::size_t j = 0; j < c; ++j) sum += prox[j].first;
  return sum / static_cast<double>(c);
}

void Subpopulation::update_fitness() {
  const std::size_t size = members_.size();
  if (size == 0) return;
  if (size == 1) {
    members_[0]->fitness = 0.0;
    return;
  }
  std::vector<double> div(size);
  for (std::size_t k = 0; k < size; ++k) div[k] = diversity_contribution(k);
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return div[a] > div[b]; });
  const double denom = static_cast<double>(size - 1);
  const double elite = std::round(params_->elite_fraction * params_->mu);
  // Below the elite size the diversity weight would turn negative; rank by
  // cost alone instead.
  const double weight = std::max(0.0, 1.0 - elite / static_cast<double>(size));
  for (std::size_t r = 0; r < size; ++r) {
    const std::size_t k = order[r];
    members_[k]->fitness = static_cast<double>(k) / denom + weight * static_cast<double>(r) / denom;
  }
}

void Subpopulation::remove_one(bool clones_only_pass) {
  update_fitness();
  const std::size_t first = 1;  // members_[0] has the best cost
  std::size_t worst = members_.size();
  for (std::size_t k = first; k < members_.size(); ++k) {
    if (clones_only_pass && !is_clone(k)) continue;
    if (worst == members_.size() || members_[k]->fitness > members_[worst]->fitness) worst = k;
  }
  if (worst == members_.size()) {
    if (clones_only_pass) {
      remove_one(false);
      return;
    }
    worst = members_.size() - 1;
  }
  erase(worst);
}

void Subpopulation::survivor_selection() {
  const auto mu = static_cast<std::size_t>(params_->mu);
  while (members_.size() > mu) remove_one(true);
}

void Subpopulation::remove_worst(std::size_t count) {
  for (std::size_t k = 0; k < count && members_.size() > 1; ++k) remove_one(false);
}

void Subpopulation::reprice(double omega) {
  for (auto& m : members_) m->penalized = penalized_cost(m->cost, omega);
  std::stable_sort(members_.begin(), members_.end(),
                   [](const auto& a, const auto& b) { return a->penalized < b->penalized; });
}

std::pair<const Individual*, const Individual*> select_parents(Population& population, Rng& rng) {
  const std::size_t size = population.size();
  if (size == 0) throw std::logic_error("select_parents on an empty population");
  population.feasible.update_fitness();
  population.infeasible.update_fitness();
  std::uniform_int_distribution<std::size_t> pick(0, size - 1);
  auto tournament = [&]() {
    const Individual& a = population.at(pick(rng));
    const Individual& b = population.at(pick(rng));
    return a.fitness <= b.fitness ? &a : &b;
  };
  const Individual* p1 = tournament();
  const Individual* p2 = tournament();
  return {p1, p2};
}

Solution initial_solution(const Instance& inst, double omega, double extra_visit_probability, Rng& rng) {
  const int n = inst.num_retailers();
  Solution s = Solution::empty(inst);
  std::vector<std::vector<int>> tours(static_cast<std::size_t>(inst.horizon));
  std::vector<int> level(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) level[static_cast<std::size_t>(i)] = inst.retailer(i).initial_stock;
  std::bernoulli_distribution extra(extra_visit_probability);
  for (int t = 0; t < inst.horizon; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    for (int i = 1; i <= n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const Retailer& r = inst.retailer(i);
      const bool needed = level[ui] < r.demand[ut];
      const bool lucky = extra(rng);
      const int q = (needed || lucky) ? r.max_level - level[ui] : 0;
      if (q > 0) {
        s.quantities[ut][ui] = q;
        tours[ut].push_back(i);
      }
      level[ui] = std::max(0, level[ui] + q - r.demand[ut]);
    }
    std::shuffle(tours[ut].begin(), tours[ut].end(), rng);
  }
  split_all(inst, tours, s, omega);
  return s;
}

Solution crossover(const Instance& inst, const Solution& p1, const Solution& p2, double omega, Rng& rng) {
  const int H = inst.horizon;
  std::vector<int> days(static_cast<std::size_t>(H));
  std::iota(days.begin(), days.end(), 0);
  std::shuffle(days.begin(), days.end(), rng);
  std::uniform_int_distribution<int> cut(0, H);
  int j1 = cut(rng);
  int j2 = cut(rng);
  while (j2 == j1) j2 = cut(rng);
  if (j1 > j2) std::swap(j1, j2);

  Solution child = Solution::empty(inst);
  std::vector<std::vector<int>> tours(static_cast<std::size_t>(H));
  for (int k = 0; k < H; ++k) {
    const int t = days[static_cast<std::size_t>(k)];
    const auto ut = static_cast<std::size_t>(t);
    const std::vector<int> tour = p1.giant_tour(t);
    std::vector<int> inherited;
    if (k < j1) {
      if (!tour.empty()) {
        const int len = static_cast<int>(tour.size());
        const int a = std::uniform_int_distribution<int>(0, len - 1)(rng);
        const int count = std::uniform_int_distribution<int>(0, len)(rng);
        for (int c = 0; c < count; ++c) inherited.push_back(tour[static_cast<std::size_t>((a + c) % len)]);
      }
    } else if (k >= j2) {
      inherited = tour;
    }
    for (int i : inherited) child.quantities[ut][static_cast<std::size_t>(i)] = p1.quantities[ut][static_cast<std::size_t>(i)];
    if (k < j2) {
      for (int i : p2.giant_tour(t)) {
        const auto ui = static_cast<std::size_t>(i);
        if (child.quantities[ut][ui] > 0) continue;
        child.quantities[ut][ui] = p2.quantities[ut][ui];
        inherited.push_back(i);
      }
    }
    tours[ut] = std::move(inherited);
  }
  cap_quantities(inst, tours, child);
  split_all(inst, tours, child, omega);
  return child;
}

double adapt_penalty(const SearchParams& params, double omega, double feasible_fraction) {
  if (feasible_fraction < params.target_feasible_low) omega *= params.omega_increase;
  else if (feasible_fraction > params.target_feasible_high) omega *= params.omega_decrease;
  return std::clamp(omega, params.omega_min, params.omega_max);
}

double default_initial_omega(const Instance& inst) {
  // Roughly the cost of one extra trip spread over an average delivery.
  double longest = 0.0;
  for (int i = 1; i <= inst.num_retailers(); ++i) longest = std::max(longest, inst.cost(kDepot, i) + inst.cost(i, kDepot));
  double demand = 0.0;
  long count = 0;
  for (const Retailer& r : inst.retailers) {
    for (int d : r.demand) {
      demand += d;
      ++count;
    }
  }
  const double mean = count > 0 ? demand / static_cast<double>(count) : 1.0;
  return std::clamp(longest / std::max(1.0, mean), 0.1, 1000.0);
}

namespace {

class Engine {
 public:
  Engine(const Instance& inst, const SearchParams& params)
      : inst_(inst),
        params_(params),
        ls_(inst, params.local_search),
        population_(params_),
        rng_(params.seed),
        omega_(params.initial_omega ? *params.initial_omega : default_initial_omega(inst)),
        start_(std::chrono::steady_clock::now()),
        time_limit_(params.resolved_time_limit(inst)) {
    omega_ = std::clamp(omega_, params.omega_min, params.omega_max);
    ls_.set_piece_sink(params.pieces);
  }

  SearchResult run() {
    const int initial = params_.initial_population_factor * params_.mu;
    for (int k = 0; k < initial && !out_of_time(); ++k) {
      insert(educated(initial_solution(inst_, omega_, params_.extra_visit_probability, rng_)), false);
    }
    const long diversify_after =
        params_.diversify_after > 0 ? params_.diversify_after : std::max<long>(1, params_.max_stagnation / 3);
    long stagnation = 0;
    while (iterations_ < params_.max_iterations && stagnation < params_.max_stagnation && !out_of_time() &&
           population_.size() > 0) {
      ++iterations_;
      const auto [p1, p2] = select_parents(population_, rng_);
      Solution child = crossover(inst_, p1->solution, p2->solution, omega_, rng_);
      const double before_best = best_objective_;
      insert(educated(std::move(child)), true);
      stagnation = best_objective_ < before_best ? 0 : stagnation + 1;
      if (stagnation > 0 && stagnation % diversify_after == 0) diversify();
      if (iterations_ % params_.penalty_window == 0) update_penalty();
      if (params_.log && params_.log_every > 0 && iterations_ % params_.log_every == 0) log_progress();
    }

    SearchResult res;
    res.iterations = iterations_;
    res.seconds = elapsed();
    res.final_omega = omega_;
    res.improvements = improvements_;
    res.local_search = ls_.stats();
    if (best_) {
      res.best = best_->solution;
      res.cost = best_->cost;
      res.feasible = true;
    } else if (!population_.infeasible.empty()) {
      res.best = population_.infeasible[0].solution;
      res.cost = evaluate(inst_, res.best, omega_);
    } else {
      res.best = Solution::empty(inst_);
      res.cost = evaluate(inst_, res.best, omega_);
    }
    return res;
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  bool out_of_time() const { return elapsed() >= time_limit_; }

  Solution educated(Solution s) {
    ls_.educate(s, omega_, rng_);
    return s;
  }

  void insert(Solution s, bool count_feasibility) {
    auto ind = make_individual(inst_, std::move(s), omega_);
    if (count_feasibility) {
      recent_.push_back(ind->feasible);
      if (static_cast<int>(recent_.size()) > params_.penalty_window) recent_.pop_front();
    }
    if (!ind->feasible && std::isfinite(ind->cost.objective()) && !ind->cost.capacity_feasible()) {
      std::bernoulli_distribution repair(params_.repair_probability);
      if (repair(rng_)) {
        for (double factor : {10.0, 100.0}) {
          Solution fixed = ind->solution;
          ls_.educate(fixed, omega_ * factor, rng_);
          auto r = make_individual(inst_, std::move(fixed), omega_);
          if (r->feasible) {
            place(std::move(r));
            break;
          }
        }
      }
    }
    place(std::move(ind));
  }

  void place(std::unique_ptr<Individual> ind) {
    if (!std::isfinite(ind->cost.objective())) return;  // forbidden stock-out
    if (ind->feasible) {
      if (ind->cost.total < best_objective_ - 1e-9 * std::max(1.0, std::abs(ind->cost.total))) {
        best_objective_ = ind->cost.total;
        best_ = std::make_unique<Individual>(*ind);
        improvements_.emplace_back(iterations_, best_objective_);
      }
      population_.feasible.add(std::move(ind));
      if (population_.feasible.size() > static_cast<std::size_t>(params_.mu + params_.lambda)) {
        population_.feasible.survivor_selection();
      }
    } else {
      population_.infeasible.add(std::move(ind));
      if (population_.infeasible.size() > static_cast<std::size_t>(params_.mu + params_.lambda)) {
        population_.infeasible.survivor_selection();
      }
    }
  }

  void update_penalty() {
    if (recent_.empty()) return;
    const double frac = static_cast<double>(std::count(recent_.begin(), recent_.end(), true)) /
                        static_cast<double>(recent_.size());
    omega_ = adapt_penalty(params_, omega_, frac);
    population_.infeasible.reprice(omega_);
  }

  void diversify() {
    const auto drop = [&](Subpopulation& sub) {
      const auto count = static_cast<std::size_t>(params_.diversify_fraction * static_cast<double>(sub.size()));
      sub.remove_worst(count);
      return count;
    };
    const std::size_t removed = drop(population_.feasible) + drop(population_.infeasible);
    for (std::size_t k = 0; k < removed && !out_of_time(); ++k) {
      insert(educated(initial_solution(inst_, omega_, params_.extra_visit_probability, rng_)), false);
    }
  }

  void log_progress() {
    *params_.log << "it " << iterations_ << " t " << elapsed() << "s feasible " << population_.feasible.size()
                 << " infeasible " << population_.infeasible.size() << " omega " << omega_ << " best ";
    if (best_) *params_.log << best_objective_;
    else *params_.log << "none";
    *params_.log << '\n';
  }

  const Instance& inst_;
  const SearchParams& params_;
  LocalSearch ls_;
  Population population_;
  Rng rng_;
  double omega_;
  std::chrono::steady_clock::time_point start_;
  double time_limit_;
  long iterations_ = 0;
  std::deque<bool> recent_;
  std::unique_ptr<Individual> best_;
  double best_objective_ = std::numeric_limits<double>::infinity();
  std::vector<std::pair<long, double>> improvements_;
};

}  // namespace

SearchResult run(const Instance& instance, const SearchParams& params) {
  if (params.mu < 1 || params.lambda < 1) throw std::invalid_argument("population sizes must be positive");
  Engine engine(instance, params);
  return engine.run();
}

}  // namespace irp
