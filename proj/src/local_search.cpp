#include "irp/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace irp {
namespace {

constexpr int kNone = -1;

struct Locator {
  std::vector<int> route;  // route index per node, kNone when not visited
  std::vector<int> index;  // position inside the route

  void rebuild(const std::vector<Route>& routes, int nodes) {
    route.assign(static_cast<std::size_t>(nodes), kNone);
    index.assign(static_cast<std::size_t>(nodes), kNone);
    for (std::size_t r = 0; r < routes.size(); ++r) {
      for (std::size_t k = 0; k < routes[r].size(); ++k) {
        route[static_cast<std::size_t>(routes[r][k])] = static_cast<int>(r);
        index[static_cast<std::size_t>(routes[r][k])] = static_cast<int>(k);
      }
    }
  }
};

class DayEditor {
 public:
  DayEditor(const Instance& inst, std::vector<Route>& routes, const std::vector<int>& q, double omega)
      : inst_(inst), routes_(routes), q_(q), omega_(omega) {}

  double penalized(const Route& r) const {
    long load = 0;
    for (int v : r) load += q_[static_cast<std::size_t>(v)];
    const long excess = std::max<long>(0, load - inst_.capacity);
    return route_distance(inst_, r) + (excess > 0 ? omega_ * static_cast<double>(excess) : 0.0);
  }

  // Candidate replacement of routes a and b (b may equal a, or be the
  // index one past the end for an unused vehicle).
  double delta(int a, int b, const Route& new_a, const Route& new_b) const {
    double before = penalized(routes_[static_cast<std::size_t>(a)]);
    double after = penalized(new_a);
    if (b != a) {
      if (static_cast<std::size_t>(b) < routes_.size()) before += penalized(routes_[static_cast<std::size_t>(b)]);
      after += penalized(new_b);
    }
    return after - before;
  }

  void commit(int a, int b, Route new_a, Route new_b) {
    if (static_cast<std::size_t>(b) == routes_.size()) routes_.emplace_back();
    routes_[static_cast<std::size_t>(a)] = std::move(new_a);
    if (b != a) routes_[static_cast<std::size_t>(b)] = std::move(new_b);
    routes_.erase(std::remove_if(routes_.begin(), routes_.end(), [](const Route& r) { return r.empty(); }),
                  routes_.end());
  }

  const Route& route(int r) const { return routes_[static_cast<std::size_t>(r)]; }
  std::size_t size() const { return routes_.size(); }

 private:
  const Instance& inst_;
  std::vector<Route>& routes_;
  const std::vector<int>& q_;
  double omega_;
};

// Rewrites a route element by element; `emit` decides what replaces each node.
template <typename Emit>
Route rewrite(const Route& r, Emit emit) {
  Route out;
  out.reserve(r.size() + 2);
  for (int e : r) emit(e, out);
  return out;
}

}  // namespace

LocalSearch::LocalSearch(const Instance& instance, LocalSearchParams params)
    : instance_(instance), params_(params) {
  const int n = instance.num_retailers();
  neighbours_.assign(static_cast<std::size_t>(n) + 1, {});
  for (int u = 1; u <= n; ++u) {
    std::vector<int> others;
    for (int v = 1; v <= n; ++v) {
      if (v != u) others.push_back(v);
    }
    std::stable_sort(others.begin(), others.end(),
                     [&](int a, int b) { return instance.cost(u, a) < instance.cost(u, b); });
    if (static_cast<int>(others.size()) > params_.granularity) others.resize(static_cast<std::size_t>(params_.granularity));
    neighbours_[static_cast<std::size_t>(u)] = std::move(others);
  }
}

bool LocalSearch::improve_day(Solution& solution, int day, double omega, Rng& rng) {
  const auto ut = static_cast<std::size_t>(day);
  DayEditor ed(instance_, solution.routes[ut], solution.quantities[ut], omega);
  Locator loc;
  loc.rebuild(solution.routes[ut], instance_.num_nodes());

  std::vector<int> order;
  for (const Route& r : solution.routes[ut]) order.insert(order.end(), r.begin(), r.end());
  std::shuffle(order.begin(), order.end(), rng);

  auto threshold = [](double before) { return -1e-9 * std::max(1.0, std::abs(before)); };
  bool improved = false;

  // Applies the candidate when it improves; returns true if applied.
  auto attempt = [&](MoveKind kind, int a, int b, Route new_a, Route new_b) {
    ++stats_.ri_moves_checked;
    const double d = ed.delta(a, b, new_a, new_b);
    const double ref = ed.penalized(ed.route(a));
    if (!(d < threshold(ref))) return false;
    double before = 0.0;
    if (params_.verify) before = evaluate(instance_, solution, omega).total;
    ed.commit(a, b, std::move(new_a), std::move(new_b));
    if (params_.verify) {
      const double after = evaluate(instance_, solution, omega).total;
      if (std::isfinite(before) && std::isfinite(after)) {
        stats_.max_move_delta_error = std::max(stats_.max_move_delta_error, std::abs((after - before) - d));
      }
    }
    ++stats_.moves[static_cast<int>(kind)];
    loc.rebuild(solution.routes[ut], instance_.num_nodes());
    improved = true;
    return true;
  };

  const int K = instance_.vehicles;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int u = order[k];
    bool moved = true;
    // Keep working on u while moves succeed.
    while (moved) {
      moved = false;
      const int ru = loc.route[static_cast<std::size_t>(u)];
      const Route& A = ed.route(ru);
      const int iu = loc.index[static_cast<std::size_t>(u)];
      const int x = iu + 1 < static_cast<int>(A.size()) ? A[static_cast<std::size_t>(iu) + 1] : kNone;

      // Relocations into an unused vehicle.
      if (static_cast<int>(ed.size()) < K && A.size() > 1) {
        const int fresh = static_cast<int>(ed.size());
        auto without = [&](std::initializer_list<int> drop) {
          return rewrite(A, [&](int e, Route& out) {
            if (std::find(drop.begin(), drop.end(), e) == drop.end()) out.push_back(e);
          });
        };
        if (attempt(MoveKind::kRelocate, ru, fresh, without({u}), Route{u})) { moved = true; continue; }
        if (x != kNone && A.size() > 2) {
          if (attempt(MoveKind::kRelocatePair, ru, fresh, without({u, x}), Route{u, x})) { moved = true; continue; }
          if (attempt(MoveKind::kRelocatePairRev, ru, fresh, without({u, x}), Route{x, u})) { moved = true; continue; }
        }
      }

      for (int v : neighbours_[static_cast<std::size_t>(u)]) {
        const int rv = loc.route[static_cast<std::size_t>(v)];
        if (rv == kNone) continue;
        const Route& B = ed.route(rv);
        const int iv = loc.index[static_cast<std::size_t>(v)];
        const int y = iv + 1 < static_cast<int>(B.size()) ? B[static_cast<std::size_t>(iv) + 1] : kNone;
        const bool same = ru == rv;

        // Both "after v" and, when v opens its route, "at the route start".
        for (int at_start = 0; at_start <= (iv == 0 ? 1 : 0); ++at_start) {
          auto insert_after_v = [&](std::initializer_list<int> drop, std::initializer_list<int> add) {
            auto emit = [&](int e, Route& out) {
              if (std::find(drop.begin(), drop.end(), e) != drop.end()) return;
              if (e == v && at_start) out.insert(out.end(), add.begin(), add.end());
              out.push_back(e);
              if (e == v && !at_start) out.insert(out.end(), add.begin(), add.end());
            };
            if (same) {
              Route r = rewrite(A, emit);
              return std::pair<Route, Route>{r, r};
            }
            return std::pair<Route, Route>{rewrite(A, emit), rewrite(B, emit)};
          };

          {
            auto [na, nb] = insert_after_v({u}, {u});
            if (attempt(MoveKind::kRelocate, ru, rv, std::move(na), std::move(nb))) { moved = true; break; }
          }
          if (x != kNone && v != x) {
            auto [na, nb] = insert_after_v({u, x}, {u, x});
            if (attempt(MoveKind::kRelocatePair, ru, rv, std::move(na), std::move(nb))) { moved = true; break; }
            auto [ra, rb] = insert_after_v({u, x}, {x, u});
            if (attempt(MoveKind::kRelocatePairRev, ru, rv, std::move(ra), std::move(rb))) { moved = true; break; }
          }
        }
        if (moved) break;

        auto swap_rule = [&](std::initializer_list<int> left, std::initializer_list<int> right) {
          auto emit = [&](int e, Route& out) {
            if (e == *left.begin()) {
              out.insert(out.end(), right.begin(), right.end());
            } else if (e == *right.begin()) {
              out.insert(out.end(), left.begin(), left.end());
            } else if (std::find(left.begin(), left.end(), e) == left.end() &&
                       std::find(right.begin(), right.end(), e) == right.end()) {
              out.push_back(e);
            }
          };
          if (same) {
            Route r = rewrite(A, emit);
            return std::pair<Route, Route>{r, r};
          }
          return std::pair<Route, Route>{rewrite(A, emit), rewrite(B, emit)};
        };
        {
          auto [na, nb] = swap_rule({u}, {v});
          if (attempt(MoveKind::kSwap, ru, rv, std::move(na), std::move(nb))) { moved = true; break; }
        }
        // Pair swaps need disjoint operands.
        if (x != kNone && v != x) {
          auto [na, nb] = swap_rule({u, x}, {v});
          if (attempt(MoveKind::kSwapPairOne, ru, rv, std::move(na), std::move(nb))) { moved = true; break; }
          if (y != kNone && y != u) {
            auto [pa, pb] = swap_rule({u, x}, {v, y});
            if (attempt(MoveKind::kSwapPairs, ru, rv, std::move(pa), std::move(pb))) { moved = true; break; }
          }
        }

        if (same) {
          if (iu < iv) {
            Route r = A;
            std::reverse(r.begin() + iu + 1, r.begin() + iv + 1);
            if (attempt(MoveKind::kTwoOpt, ru, ru, r, r)) { moved = true; break; }
          }
          continue;
        }
        const auto cut_a = A.begin() + iu + 1;
        const auto cut_b = B.begin() + iv + 1;
        {
          // u -> v and x -> y.
          Route na(A.begin(), cut_a);
          na.insert(na.end(), std::make_reverse_iterator(cut_b), B.rend());
          Route nb(std::make_reverse_iterator(A.end()), std::make_reverse_iterator(cut_a));
          nb.insert(nb.end(), cut_b, B.end());
          if (attempt(MoveKind::kTwoOptStarRev, ru, rv, std::move(na), std::move(nb))) { moved = true; break; }
        }
        {
          Route na(A.begin(), cut_a);
          na.insert(na.end(), cut_b, B.end());
          Route nb(B.begin(), cut_b);
          nb.insert(nb.end(), cut_a, A.end());
          if (attempt(MoveKind::kTwoOptStar, ru, rv, std::move(na), std::move(nb))) { moved = true; break; }
        }
      }
    }
  }
  return improved;
}

void LocalSearch::route_improvement(Solution& solution, double omega, Rng& rng) {
  for (int t = 0; t < instance_.horizon; ++t) {
    while (improve_day(solution, t, omega, rng)) {
    }
  }
}

void LocalSearch::delivery_schedule_improvement(Solution& solution, double omega, Rng& rng) {
  std::vector<int> order(static_cast<std::size_t>(instance_.num_retailers()));
  std::iota(order.begin(), order.end(), 1);
  const DsOptions options{params_.verify ? &stats_.ds_audit : nullptr, pieces_};
  for (int sweep = 0; sweep < params_.max_dsi_sweeps; ++sweep) {
    ++stats_.dsi_sweeps;
    std::shuffle(order.begin(), order.end(), rng);
    const double before = params_.verify ? evaluate(instance_, solution, omega).total : 0.0;
    bool improved = false;
    for (int i : order) {
      if (improve_retailer(instance_, solution, i, omega, options)) {
        improved = true;
        ++stats_.ds_improvements;
      }
    }
    if (params_.verify && evaluate(instance_, solution, omega).total > before + 1e-9 * std::max(1.0, std::abs(before))) {
      ++stats_.ds_worsened_sweep;
    }
    if (!improved) break;
  }
}

void LocalSearch::educate(Solution& solution, double omega, Rng& rng) {
  route_improvement(solution, omega, rng);
  delivery_schedule_improvement(solution, omega, rng);
  route_improvement(solution, omega, rng);
}

}  // namespace irp
