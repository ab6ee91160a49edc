#include "irp/ds_operator.hpp"

#include <gtest/gtest.h>

#include <random>

#include "irp/oracle.hpp"
#include "test_util.hpp"

namespace irp {
namespace {

// Depot at the origin, retailers on a line; exact costs.
Instance line_instance(int n, int horizon, int vehicles, int capacity) {
  Instance inst;
  inst.name = "line";
  inst.horizon = horizon;
  inst.vehicles = vehicles;
  inst.capacity = capacity;
  inst.supplier.initial_stock = 100;
  inst.supplier.production.assign(static_cast<std::size_t>(horizon), 0);
  inst.supplier.holding_cost.assign(static_cast<std::size_t>(horizon), 0.0);
  std::vector<Point> coords{{0, 0}};
  for (int i = 1; i <= n; ++i) {
    Retailer r;
    r.location = {static_cast<double>(i), 0};
    r.max_level = 10;
    r.initial_stock = 5;
    r.demand.assign(static_cast<std::size_t>(horizon), 2);
    r.holding_cost = 1.0;
    coords.push_back(r.location);
    inst.retailers.push_back(r);
  }
  inst.cost = build_cost_matrix(coords, CostRounding::kExact);
  inst.validate();
  return inst;
}

TEST(RemoveRetailer, NoOpAndSplice) {
  Instance inst = line_instance(3, 1, 1, 50);
  Solution s = Solution::empty(inst);
  s.routes[0] = {{1, 3}};
  s.quantities[0][1] = 2;
  s.quantities[0][3] = 2;
  EXPECT_EQ(remove_retailer(s, 2), s);

  s.routes[0] = {{1, 2, 3}};
  s.quantities[0][2] = 4;
  const Solution r = remove_retailer(s, 2);
  EXPECT_EQ(r.routes[0], (std::vector<Route>{{1, 3}}));
  EXPECT_EQ(r.quantities[0][2], 0);
  const double saving = evaluate(inst, s, 0).routing - evaluate(inst, r, 0).routing;
  EXPECT_DOUBLE_EQ(saving, inst.cost(1, 2) + inst.cost(2, 3) - inst.cost(1, 3));

  Solution alone = Solution::empty(inst);
  alone.routes[0] = {{2}};
  alone.quantities[0][2] = 1;
  EXPECT_TRUE(remove_retailer(alone, 2).routes[0].empty());
}

TEST(InsertionOptions, NewRouteOnly) {
  Instance inst = line_instance(2, 1, 2, 10);
  const auto opts = build_insertion_options(inst, Solution::empty(inst), 2, 1.0, 0);
  ASSERT_EQ(opts.options.size(), 1u);
  EXPECT_EQ(opts.options[0].route, kNewRoute);
  EXPECT_DOUBLE_EQ(opts.options[0].residual, 10);
  EXPECT_DOUBLE_EQ(opts.options[0].detour, 4);
}

TEST(InsertionOptions, DeliveryCostFunction) {
  InsertionOptions opts;
  opts.omega = 1.0;
  opts.options = {{5, 2, 0, 0}, {10, 6, 1, 0}};
  EXPECT_DOUBLE_EQ(opts.evaluate(3), 2);
  EXPECT_DOUBLE_EQ(opts.evaluate(7), 4);
  EXPECT_DOUBLE_EQ(opts.evaluate(12), 8);
}

TEST(InsertionOptions, DominatedOptionDropped) {
  // Two existing routes on a full fleet: one with residual 5 and detour 2,
  // one with residual 4 and a longer detour.
  Instance inst;
  inst.horizon = 1;
  inst.vehicles = 2;
  inst.capacity = 10;
  inst.supplier.production = {0};
  inst.supplier.holding_cost = {0};
  inst.retailers.resize(3);
  for (auto& r : inst.retailers) {
    r.max_level = 20;
    r.demand = {0};
    r.holding_cost = 1;
  }
  inst.cost = CostMatrix(4);
  auto set = [&](int a, int b, double v) { inst.cost(a, b) = inst.cost(b, a) = v; };
  set(0, 1, 5); set(0, 2, 5); set(0, 3, 5); set(1, 2, 1); set(1, 3, 5.5); set(2, 3, 9);
  inst.validate();
  Solution s = Solution::empty(inst);
  s.routes[0] = {{1}, {2}};
  s.quantities[0][1] = 5;
  s.quantities[0][2] = 6;
  const auto opts = build_insertion_options(inst, s, 3, 1.0, 0);
  ASSERT_EQ(opts.options.size(), 1u);
  EXPECT_EQ(opts.options[0].route, 0);
  EXPECT_DOUBLE_EQ(opts.options[0].residual, 5);
  EXPECT_DOUBLE_EQ(opts.options[0].detour, 5.5);
  for (int q = 1; q <= 20; ++q) EXPECT_DOUBLE_EQ(*opts.cost.evaluate(q), opts.evaluate(q)) << q;
}

TEST(DpReinsertion, NoDeliveryWhenStocked) {
  Instance inst = line_instance(1, 1, 1, 10);
  inst.stockout_factor = 5;
  const Schedule s = dp_reinsertion(inst, Solution::empty(inst), 1, 1.0, true);
  ASSERT_TRUE(s.feasible);
  EXPECT_FALSE(s.days[0].deliver);
  EXPECT_DOUBLE_EQ(s.cost, 1.0 * 3);
}

TEST(DpReinsertion, ApplyMatchesPrediction) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    testing_util::TinyShape shape{4, 3, 2, 8, 10, trial % 2 ? 5.0 : kNoStockout};
    Instance inst = testing_util::random_instance(rng, shape);
    const int i = 1 + trial % 4;
    Solution reduced = testing_util::random_solution(rng, inst, i);
    const Schedule s = dp_reinsertion(inst, reduced, i, 3.0, inst.allows_stockout());
    if (!s.feasible) continue;
    const double base = cost_without_retailer(inst, reduced, 3.0, i);
    Solution applied = reduced;
    apply_schedule(inst, applied, i, s);
    std::vector<int> qi;
    for (const auto& day : applied.quantities) qi.push_back(day[static_cast<std::size_t>(i)]);
    EXPECT_NEAR(cost_without_retailer(inst, applied, 3.0, i) + retailer_inventory_cost(inst, i, qi), base + s.cost,
                1e-9);
    ASSERT_TRUE(std::isfinite(base));
    EXPECT_NEAR(evaluate(inst, applied, 3.0).total, base + s.cost, 1e-9);
    if (!inst.allows_stockout()) {
      const auto trace = simulate_inventory(inst, applied.quantities);
      for (int b : trace.stockout[static_cast<std::size_t>(i)]) EXPECT_EQ(b, 0);
    }
  }
}

TEST(DpReinsertion, AgreesWithBruteForce) {
  std::mt19937_64 rng(2024);
  const double rhos[] = {5.0, 50.0, kNoStockout};
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    testing_util::TinyShape shape;
    shape.retailers = 1 + trial % 4;
    shape.horizon = 1 + trial % 3;
    shape.vehicles = 1 + (trial / 3) % 2;
    shape.max_level = 8;
    shape.capacity = std::uniform_int_distribution<int>(3, 12)(rng);
    shape.stockout_factor = rhos[trial % 3];
    Instance inst = testing_util::random_instance(rng, shape);
    const int i = std::uniform_int_distribution<int>(1, shape.retailers)(rng);
    const Solution reduced = testing_util::random_solution(rng, inst, i);
    const double omega = std::uniform_int_distribution<int>(0, 4)(rng);
    const Schedule dp = dp_reinsertion(inst, reduced, i, omega, inst.allows_stockout());
    const OracleResult bf = brute_force_reinsertion(inst, reduced, i, omega, inst.allows_stockout());
    EXPECT_EQ(bf.enumerated, bf.expected);
    ASSERT_EQ(dp.feasible, bf.schedule.feasible) << "trial " << trial;
    if (dp.feasible) {
      EXPECT_EQ(dp.cost, bf.schedule.cost) << "trial " << trial;
      ++compared;
    }
  }
  EXPECT_GE(compared, 200);
}

TEST(ApplySchedule, Guards) {
  Instance inst = line_instance(2, 1, 1, 10);
  Solution reduced = Solution::empty(inst);
  reduced.routes[0] = {{1}};
  reduced.quantities[0][1] = 3;
  Schedule s;
  s.days = {{true, 2, kNewRoute, 0}};
  s.fingerprint = fingerprint(reduced);
  Solution copy = reduced;
  EXPECT_THROW(apply_schedule(inst, copy, 2, s), std::logic_error);

  Schedule none;
  none.days = {{}};
  none.fingerprint = fingerprint(reduced);
  copy = reduced;
  apply_schedule(inst, copy, 2, none);
  EXPECT_EQ(copy, reduced);

  Solution changed = reduced;
  changed.quantities[0][1] = 4;
  EXPECT_THROW(apply_schedule(inst, changed, 2, none), std::logic_error);
}

TEST(PieceCountProbe, InitialPoint) {
  Instance inst = line_instance(1, 2, 1, 10);
  CostToGo states;
  dp_reinsertion(inst, Solution::empty(inst), 1, 1.0, false, &states);
  EXPECT_EQ(states.C[0].piece_count(), 1u);
  const auto counts = piece_count_probe(states);
  ASSERT_EQ(counts.size(), 2u);
  for (std::size_t t = 0; t < counts.size(); ++t) {
    EXPECT_LE(counts[t], static_cast<std::size_t>(inst.retailer(1).max_level) + 1);
    for (const Segment& seg : states.C[t + 1].segments()) {
      EXPECT_GE(seg.x_lo, 0);
      EXPECT_LE(seg.x_hi, inst.retailer(1).max_level - inst.retailer(1).demand[t]);
      EXPECT_EQ(seg.x_lo, std::floor(seg.x_lo));
    }
  }
}

TEST(ImproveRetailer, NeverWorsens) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    testing_util::TinyShape shape{4, 3, 2, 8, 9, trial % 3 == 0 ? kNoStockout : 20.0};
    Instance inst = testing_util::random_instance(rng, shape);
    Solution s = testing_util::random_solution(rng, inst);
    DsAudit audit;
    for (int i = 1; i <= inst.num_retailers(); ++i) {
      const double before = evaluate(inst, s, 2.0).total;
      improve_retailer(inst, s, i, 2.0, {&audit, nullptr});
      EXPECT_LE(evaluate(inst, s, 2.0).total, before + 1e-9);
    }
    EXPECT_EQ(audit.worsened, 0);
    EXPECT_LE(audit.max_prediction_error, 1e-6);
  }
}

}  // namespace
}  // namespace irp
