#pragma once

#include <random>
#include <vector>

#include "irp/ds_operator.hpp"
#include "irp/instance.hpp"
#include "irp/solution.hpp"

namespace irp {

using Rng = std::mt19937_64;

enum class MoveKind {
  kRelocate,          // u after v
  kRelocatePair,      // (u, x) after v
  kRelocatePairRev,   // (x, u) after v
  kSwap,              // u <-> v
  kSwapPairOne,       // (u, x) <-> v
  kSwapPairs,         // (u, x) <-> (v, y)
  kTwoOpt,            // reverse x..v inside one route
  kTwoOptStarRev,     // u->v and x->y across routes, reversing the joined parts
  kTwoOptStar,        // tails of two routes exchanged
};
inline constexpr int kNumMoveKinds = 9;

struct LocalSearchParams {
  int granularity = 20;  // correlated neighbours per retailer
  int max_dsi_sweeps = 1000;
  bool verify = false;   // recompute costs from scratch after every accepted move
};

struct LocalSearchStats {
  long moves[kNumMoveKinds] = {};
  long ri_moves_checked = 0;
  double max_move_delta_error = 0.0;
  long ds_improvements = 0;
  long dsi_sweeps = 0;
  DsAudit ds_audit;
  long ds_worsened_sweep = 0;  // DSI sweeps whose total cost increased
};

// Education procedure on one instance. Holds the granular neighbour lists;
// one object per search thread.
class LocalSearch {
 public:
  LocalSearch(const Instance& instance, LocalSearchParams params = {});

  // First-improvement descent over the nine route neighbourhoods, day by
  // day, quantities fixed.
  void route_improvement(Solution& solution, double omega, Rng& rng);
  // DS operator swept over all retailers in random order until a sweep
  // brings no improvement.
  void delivery_schedule_improvement(Solution& solution, double omega, Rng& rng);
  // RI, DSI, RI.
  void educate(Solution& solution, double omega, Rng& rng);

  void set_piece_sink(const PieceSink* sink) { pieces_ = sink; }
  const LocalSearchStats& stats() const { return stats_; }
  LocalSearchStats& stats() { return stats_; }
  const std::vector<std::vector<int>>& neighbours() const { return neighbours_; }

 private:
  bool improve_day(Solution& solution, int day, double omega, Rng& rng);

  const Instance& instance_;
  LocalSearchParams params_;
  std::vector<std::vector<int>> neighbours_;
  const PieceSink* pieces_ = nullptr;
  LocalSearchStats stats_;
};

}  // namespace irp
