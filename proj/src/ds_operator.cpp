#include "irp/ds_operator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace irp {
namespace {

double option_cost(const InsertionOption& o, double omega, int q) {
  const double over = q - o.residual;
  return over > 0 ? o.detour + omega * over : o.detour;
}

// F restricted to [1, U] for one option: flat up to the residual capacity,
// then rising with slope omega.
PiecewiseLinear option_function(const InsertionOption& o, double omega, int max_q) {
  const double hi = max_q;
  if (o.residual >= hi) return PiecewiseLinear::linear(1, hi, o.detour, 0.0);
  if (o.residual >= 1) {
    std::vector<Segment> segs{{1, o.residual, o.detour, 0.0}};
    if (o.residual < hi) segs.push_back({o.residual, hi, o.detour, omega});
    return PiecewiseLinear::from_sorted(std::move(segs));
  }
  return PiecewiseLinear::linear(1, hi, o.detour + omega * (1 - o.residual), omega);
}

bool dominated(const InsertionOption& kept, const InsertionOption& next, double omega) {
  // `next` has detour >= kept.detour. It never wins unless it offers more
  // residual capacity, and (with omega > 0) enough more to pay for the
  // extra detour.
  if (next.residual <= kept.residual) return true;
  if (omega <= 0) return true;
  return next.residual <= kept.residual + (next.detour - kept.detour) / omega;
}

// v beats the incumbent best by more than the comparison tolerance.
bool improves(double v, double best) { return std::isinf(best) ? v < best : v < best - plf_tolerance(best); }

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  constexpr std::uint64_t kPrime = 1099511628211ULL;
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xffU;
    h *= kPrime;
  }
  return h;
}

}  // namespace

double InsertionOptions::evaluate(int q) const { return option_cost(options[best_option(q)], omega, q); }

std::size_t InsertionOptions::best_option(int q) const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < options.size(); ++k) {
    if (option_cost(options[k], omega, q) < option_cost(options[best], omega, q)) best = k;
  }
  return best;
}

InsertionOptions build_insertion_options(const Instance& instance, const Solution& reduced, int retailer,
                                         double omega, int day) {
  const auto& c = instance.cost;
  const auto& routes = reduced.routes[static_cast<std::size_t>(day)];
  std::vector<InsertionOption> all;
  all.reserve(routes.size() + 1);
  for (std::size_t r = 0; r < routes.size(); ++r) {
    const Route& route = routes[r];
    InsertionOption o;
    o.route = static_cast<int>(r);
    o.residual = std::max(0, instance.capacity - reduced.route_load(day, r));
    o.detour = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p <= route.size(); ++p) {
      const int u = p == 0 ? kDepot : route[p - 1];
      const int v = p == route.size() ? kDepot : route[p];
      const double delta = c(u, retailer) + c(retailer, v) - c(u, v);
      if (delta < o.detour) {
        o.detour = delta;
        o.position = static_cast<int>(p);
      }
    }
    all.push_back(o);
  }
  if (static_cast<int>(routes.size()) < instance.vehicles) {
    all.push_back({static_cast<double>(instance.capacity), c(kDepot, retailer) + c(retailer, kDepot), kNewRoute, 0});
  }
  std::stable_sort(all.begin(), all.end(), [](const InsertionOption& a, const InsertionOption& b) {
    if (a.detour != b.detour) return a.detour < b.detour;
    return a.residual > b.residual;
  });

  InsertionOptions out;
  out.omega = omega;
  for (const InsertionOption& o : all) {
    if (out.options.empty() || !dominated(out.options.back(), o, omega)) out.options.push_back(o);
  }

  const int max_q = instance.retailer(retailer).max_level;
  if (max_q >= 1 && !out.options.empty()) {
    std::vector<PiecewiseLinear> parts;
    parts.reserve(out.options.size());
    for (const InsertionOption& o : out.options) parts.push_back(option_function(o, omega, max_q));
    out.cost = restrict_and_prune(lower_envelope(std::move(parts)), 1, max_q);
  }
  return out;
}

Solution remove_retailer(const Solution& solution, int retailer) {
  Solution out = solution;
  for (std::size_t t = 0; t < out.routes.size(); ++t) {
    for (Route& r : out.routes[t]) r.erase(std::remove(r.begin(), r.end(), retailer), r.end());
    out.quantities[t][static_cast<std::size_t>(retailer)] = 0;
  }
  out.normalize();
  return out;
}

std::uint64_t fingerprint(const Solution& solution) {
  std::uint64_t h = 14695981039346656037ULL;
  h = mix(h, solution.routes.size());
  for (std::size_t t = 0; t < solution.routes.size(); ++t) {
    h = mix(h, solution.routes[t].size());
    for (const Route& r : solution.routes[t]) {
      h = mix(h, r.size());
      for (int v : r) h = mix(h, static_cast<std::uint64_t>(v));
    }
    for (int q : solution.quantities[t]) h = mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(q)));
  }
  return h;
}

Schedule dp_reinsertion(const Instance& instance, const Solution& reduced, int retailer, double omega,
                        bool allow_stockout, CostToGo* states) {
  CostToGo local;
  CostToGo& st = states ? *states : local;
  const Retailer& r = instance.retailer(retailer);
  const int H = instance.horizon;
  const double h = r.holding_cost;
  const double rho = instance.stockout_factor;
  const bool soa = allow_stockout && instance.allows_stockout();
  const double U = r.max_level;

  st = CostToGo{};
  st.C.reserve(static_cast<std::size_t>(H) + 1);
  st.C.push_back(PiecewiseLinear::point(r.initial_stock, 0.0));
  std::vector<PiecewiseLinear> delivery(static_cast<std::size_t>(H));

  Schedule sched;
  sched.fingerprint = fingerprint(reduced);
  sched.days.assign(static_cast<std::size_t>(H), {});

  for (int t = 0; t < H; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    const double d = r.demand[ut];
    const double lo = soa ? -d : 0.0;
    const double hi = U - d;
    st.options.push_back(build_insertion_options(instance, reduced, retailer, omega, t));
    delivery[ut] = add_affine(st.options.back().cost, -instance.supplier_credit(t), 0.0);

    const PiecewiseLinear shifted = translate(st.C.back(), d);
    PiecewiseLinear f1 = add_affine(restrict_and_prune(shifted, lo, hi), h, 0.0);
    PiecewiseLinear f2;
    if (!delivery[ut].empty() && lo <= hi) {
      f2 = add_affine(infimal_convolution_within(shifted, delivery[ut], lo, hi), h, 0.0);
    }
    PiecewiseLinear c_hat = lower_envelope(f1, f2);

    PiecewiseLinear next;
    if (soa) {
      // End-of-day inventory 0 collects every pre-demand shortfall; swap the
      // holding term for the stock-out penalty on that part.
      auto shortfall = add_affine(restrict_and_prune(c_hat, lo, 0), -(rho + 1.0) * h, 0.0).integer_minimum();
      next = restrict_and_prune(c_hat, 1, hi);
      if (shortfall) next = lower_envelope(PiecewiseLinear::point(0, shortfall->value), next);
    } else {
      next = restrict_and_prune(c_hat, 0, hi);
    }
    st.f1.push_back(std::move(f1));
    st.c_hat.push_back(std::move(c_hat));
    st.C.push_back(std::move(next));
    if (st.C.back().empty()) {
      sched.feasible = false;
      sched.cost = kNoStockout;
      return sched;
    }
  }

  const auto terminal = st.C.back().integer_minimum();
  assert(terminal);
  long level = terminal->x;
  std::vector<int> q(static_cast<std::size_t>(H), 0);
  for (int t = H - 1; t >= 0; --t) {
    const auto ut = static_cast<std::size_t>(t);
    const int d = r.demand[ut];
    long pre = level;  // Î: may be negative when a shortfall is folded into level 0
    if (soa && level == 0) {
      double best = std::numeric_limits<double>::infinity();
      for (long x = 0; x >= -d; --x) {
        const auto v = st.c_hat[ut].evaluate(static_cast<double>(x));
        if (!v) continue;
        const double folded = *v - (rho + 1.0) * h * static_cast<double>(x);
        if (improves(folded, best)) {
          best = folded;
          pre = x;
        }
      }
    }
    const double target = *st.c_hat[ut].evaluate(static_cast<double>(pre));
    const auto skip = st.f1[ut].evaluate(static_cast<double>(pre));
    if (skip && *skip <= target + plf_tolerance(target)) {
      level = pre + d;
      continue;
    }
    const PiecewiseLinear& prev = st.C[ut];
    double best = std::numeric_limits<double>::infinity();
    int best_q = 0;
    for (long qq = 1; qq <= std::min<long>(r.max_level, pre + d); ++qq) {
      const auto a = prev.evaluate(static_cast<double>(pre + d - qq));
      const auto g = delivery[ut].evaluate(static_cast<double>(qq));
      if (!a || !g) continue;
      if (improves(*a + *g, best)) {
        best = *a + *g;
        best_q = static_cast<int>(qq);
      }
    }
    assert(best_q > 0);
    const InsertionOptions& opts = st.options[ut];
    const InsertionOption& o = opts.options[opts.best_option(best_q)];
    sched.days[ut] = {true, best_q, o.route, o.position};
    q[ut] = best_q;
    level = pre + d - best_q;
  }
  assert(level == r.initial_stock);

  double cost = retailer_inventory_cost(instance, retailer, q);
  for (int t = 0; t < H; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    if (q[ut] > 0) cost += st.options[ut].evaluate(q[ut]) - instance.supplier_credit(t) * q[ut];
  }
  assert(std::abs(cost - terminal->value) <= 1e-6 * std::max(1.0, std::abs(cost)));
  sched.cost = cost;
  return sched;
}

void apply_schedule(const Instance& instance, Solution& reduced, int retailer, const Schedule& schedule) {
  if (fingerprint(reduced) != schedule.fingerprint) {
    throw std::logic_error("apply_schedule: solution changed since the schedule was computed");
  }
  if (schedule.days.size() != reduced.routes.size()) throw std::logic_error("apply_schedule: horizon mismatch");
  for (std::size_t t = 0; t < schedule.days.size(); ++t) {
    const ScheduleDay& s = schedule.days[t];
    if (!s.deliver) continue;
    if (reduced.visits(static_cast<int>(t), retailer)) {
      throw std::logic_error("apply_schedule: retailer already present on day " + std::to_string(t));
    }
    auto& routes = reduced.routes[t];
    if (s.route == kNewRoute) {
      if (static_cast<int>(routes.size()) >= instance.vehicles) {
        throw std::logic_error("apply_schedule: new route requested on a day with all vehicles in use");
      }
      routes.push_back({retailer});
    } else {
      if (s.route < 0 || static_cast<std::size_t>(s.route) >= routes.size()) {
        throw std::logic_error("apply_schedule: unknown route");
      }
      Route& route = routes[static_cast<std::size_t>(s.route)];
      route.insert(route.begin() + s.position, retailer);
    }
    reduced.quantities[t][static_cast<std::size_t>(retailer)] = s.quantity;
  }
}

std::vector<std::size_t> piece_count_probe(const CostToGo& states) {
  std::vector<std::size_t> out;
  for (std::size_t t = 1; t < states.C.size(); ++t) out.push_back(states.C[t].piece_count());
  return out;
}

bool improve_retailer(const Instance& instance, Solution& solution, int retailer, double omega,
                      const DsOptions& options) {
  Solution reduced = remove_retailer(solution, retailer);
  CostToGo states;
  const Schedule sched = dp_reinsertion(instance, reduced, retailer, omega, instance.allows_stockout(),
                                        options.pieces ? &states : nullptr);
  if (options.pieces) {
    const auto counts = piece_count_probe(states);
    for (std::size_t t = 0; t < counts.size(); ++t) (*options.pieces)(static_cast<int>(t), retailer, counts[t]);
  }
  if (!sched.feasible) return false;

  std::vector<int> q_cur(solution.quantities.size());
  for (std::size_t t = 0; t < q_cur.size(); ++t) q_cur[t] = solution.quantities[t][static_cast<std::size_t>(retailer)];
  const double base_before = cost_without_retailer(instance, solution, omega, retailer);
  const double base_reduced = cost_without_retailer(instance, reduced, omega, retailer);
  const double current = base_before - base_reduced + retailer_inventory_cost(instance, retailer, q_cur);
  const bool better = std::isinf(current) ? std::isfinite(sched.cost)
                                          : sched.cost < current - plf_tolerance(current);
  if (!better) return false;

  apply_schedule(instance, reduced, retailer, sched);
  if (options.audit) {
    const double before = evaluate(instance, solution, omega).total;
    const double after = evaluate(instance, reduced, omega).total;
    ++options.audit->applications;
    if (after > before + 1e-9 * std::max(1.0, std::abs(before))) ++options.audit->worsened;
    const double predicted = base_reduced + sched.cost;
    options.audit->max_prediction_error = std::max(options.audit->max_prediction_error, std::abs(after - predicted));
  }
  solution = std::move(reduced);
  return true;
}

}  // namespace irp
