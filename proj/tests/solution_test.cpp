#include "irp/solution.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

namespace irp {
namespace {

Instance single_retailer(int initial, std::vector<int> demand, double rho = 10.0) {
  Instance inst;
  inst.horizon = static_cast<int>(demand.size());
  inst.vehicles = 1;
  inst.capacity = 10;
  inst.stockout_factor = rho;
  inst.supplier.initial_stock = 0;
  inst.supplier.production.assign(demand.size(), 0);
  inst.supplier.holding_cost.assign(demand.size(), 0.0);
  Retailer r;
  r.initial_stock = initial;
  r.max_level = 10;
  r.demand = std::move(demand);
  r.holding_cost = 1;
  inst.retailers.push_back(r);
  inst.cost = CostMatrix(2);
  inst.cost(0, 1) = inst.cost(1, 0) = 5;
  inst.validate();
  return inst;
}

TEST(SimulateInventory, LostSalesRecursion) {
  {
    const Instance inst = single_retailer(5, {2, 2});
    const auto tr = simulate_inventory(inst, {{0, 0}, {0, 0}});
    EXPECT_EQ(tr.retailer[1], (std::vector<int>{3, 1}));
    EXPECT_EQ(tr.stockout[1], (std::vector<int>{0, 0}));
  }
  {
    const Instance inst = single_retailer(0, {3});
    const auto tr = simulate_inventory(inst, {{0, 0}});
    EXPECT_EQ(tr.retailer[1], (std::vector<int>{0}));
    EXPECT_EQ(tr.stockout[1], (std::vector<int>{3}));
  }
  {
    const Instance inst = single_retailer(1, {3});
    const auto tr = simulate_inventory(inst, {{0, 1}});
    EXPECT_EQ(tr.retailer[1], (std::vector<int>{0}));
    EXPECT_EQ(tr.stockout[1], (std::vector<int>{1}));
  }
}

TEST(SimulateInventory, SupplierBalance) {
  Instance inst = single_retailer(0, {1, 1});
  inst.supplier.initial_stock = 4;
  inst.supplier.production = {3, 2};
  const auto tr = simulate_inventory(inst, {{0, 2}, {0, 6}});
  EXPECT_EQ(tr.supplier, (std::vector<long>{5, 1}));
}

TEST(Evaluate, EmptySolutionCostsNothing) {
  Instance inst = single_retailer(0, {0, 0});
  inst.supplier.holding_cost = {1, 1};
  const CostBreakdown c = evaluate(inst, Solution::empty(inst), 3.0);
  EXPECT_EQ(c.total, 0.0);
}

TEST(Evaluate, RoutingAndPenalty) {
  const Instance inst = single_retailer(0, {0});
  Solution s = Solution::empty(inst);
  s.routes[0] = {{1}};
  s.quantities[0][1] = 1;
  EXPECT_DOUBLE_EQ(evaluate(inst, s, 0).routing, 10);

  Instance big = single_retailer(0, {13});
  big.retailers[0].max_level = 20;
  big.validate();
  Solution over = Solution::empty(big);
  over.routes[0] = {{1}};
  over.quantities[0][1] = 13;  // Q + 3
  const CostBreakdown c = evaluate(big, over, 2.0);
  EXPECT_EQ(c.capacity_excess, 3);
  EXPECT_DOUBLE_EQ(c.capacity_excess_penalty, 6);
  EXPECT_DOUBLE_EQ(c.objective(), c.total - 6);
}

TEST(Evaluate, HoldingAndStockoutTerms) {
  Instance inst = single_retailer(2, {1, 4}, 10.0);
  inst.supplier.initial_stock = 7;
  inst.supplier.holding_cost = {0.5, 0.5};
  const Solution s = Solution::empty(inst);
  const CostBreakdown c = evaluate(inst, s, 0);
  // I = [1, 0], B = [0, 3]; supplier keeps 7 both days.
  EXPECT_DOUBLE_EQ(c.retailer_holding, 1);
  EXPECT_DOUBLE_EQ(c.stockout_penalty, 10 * 1 * 3);
  EXPECT_DOUBLE_EQ(c.supplier_holding, 7);
  EXPECT_EQ(c.stockout_quantity, 3);

  inst.stockout_factor = kNoStockout;
  EXPECT_TRUE(std::isinf(evaluate(inst, s, 0).total));
  // No stock-out: the infinite rho never multiplies a zero.
  Instance ok = single_retailer(5, {1, 1}, kNoStockout);
  EXPECT_TRUE(std::isfinite(evaluate(ok, Solution::empty(ok), 0).total));
}

TEST(Evaluate, MonotoneInRho) {
  std::mt19937_64 rng(3);
  const double rhos[] = {1.5, 2, 5, 10, 50, 100, 300, 1e6, kNoStockout};
  for (int trial = 0; trial < 200; ++trial) {
    Instance inst = testing_util::random_instance(rng, {4, 3, 2, 6, 8, 2.0});
    const Solution s = testing_util::random_solution(rng, inst);
    double prev = -1;
    for (double rho : rhos) {
      inst.stockout_factor = rho;
      const double v = evaluate(inst, s, 1.0).total;
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(CostWithoutRetailer, DecomposesTotal) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = testing_util::random_instance(rng, {4, 3, 2, 6, 8, 7.0});
    const Solution s = testing_util::random_solution(rng, inst);
    for (int i = 1; i <= 4; ++i) {
      std::vector<int> qi;
      for (const auto& day : s.quantities) qi.push_back(day[static_cast<std::size_t>(i)]);
      EXPECT_NEAR(cost_without_retailer(inst, s, 2.0, i) + retailer_inventory_cost(inst, i, qi),
                  evaluate(inst, s, 2.0).total, 1e-9);
    }
  }
}

class SplitTest : public ::testing::Test {
 protected:
  void SetUp() override {
    inst.horizon = 1;
    inst.vehicles = 2;
    inst.capacity = 10;
    inst.supplier.production = {0};
    inst.supplier.holding_cost = {0};
    const std::vector<Point> pts{{0, 0}, {10, 0}, {10, 1}};
    for (int k = 1; k <= 2; ++k) {
      Retailer r;
      r.location = pts[static_cast<std::size_t>(k)];
      r.max_level = 20;
      r.demand = {0};
      r.holding_cost = 1;
      inst.retailers.push_back(r);
    }
    inst.cost = build_cost_matrix(pts, CostRounding::kExact);
    inst.validate();
  }
  Instance inst;
};

TEST_F(SplitTest, SingleRouteWhenItFits) {
  const std::vector<int> tour{1, 2};
  const std::vector<int> q{0, 4, 4};
  const auto routes = split_day(inst, tour, q, 100.0);
  ASSERT_EQ(routes.size(), 1u);
  EXPECT_EQ(routes[0], (Route{1, 2}));
}

TEST_F(SplitTest, FullLoadsSeparate) {
  const std::vector<int> tour{1, 2};
  const std::vector<int> q{0, 10, 10};
  const auto routes = split_day(inst, tour, q, 100.0);
  EXPECT_EQ(routes, (std::vector<Route>{{1}, {2}}));
}

TEST_F(SplitTest, CheapPenaltyKeepsOneRoute) {
  const std::vector<int> tour{1, 2};
  const std::vector<int> q{0, 10, 10};
  EXPECT_EQ(split_day(inst, tour, q, 0.1).size(), 1u);
}

TEST_F(SplitTest, EmptyAndUnknown) {
  EXPECT_TRUE(split_day(inst, std::vector<int>{}, std::vector<int>{0, 0, 0}, 1.0).empty());
  EXPECT_THROW(split_day(inst, std::vector<int>{3}, std::vector<int>{0, 0, 0, 0}, 1.0), std::invalid_argument);
}

TEST(Split, NoWorseThanTrivialPartitions) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = testing_util::random_instance(rng, {6, 1, 6, 9, 10, 5.0});
    std::vector<int> tour{1, 2, 3, 4, 5, 6};
    std::shuffle(tour.begin(), tour.end(), rng);
    std::vector<int> q(7, 0);
    for (int i = 1; i <= 6; ++i) q[static_cast<std::size_t>(i)] = std::uniform_int_distribution<int>(1, 9)(rng);
    const double omega = trial % 5;
    auto cost = [&](const std::vector<Route>& routes) {
      Solution s = Solution::empty(inst);
      s.routes[0] = routes;
      s.quantities[0] = q;
      const CostBreakdown c = evaluate(inst, s, omega);
      return c.routing + c.capacity_excess_penalty;
    };
    const auto routes = split_day(inst, tour, q, omega);
    std::vector<Route> singles;
    for (int v : tour) singles.push_back({v});
    EXPECT_LE(cost(routes), cost({tour}) + 1e-9);
    EXPECT_LE(cost(routes), cost(singles) + 1e-9);
    Route joined;
    for (const Route& r : routes) joined.insert(joined.end(), r.begin(), r.end());
    EXPECT_EQ(joined, tour);
  }
}

TEST(Solution, GiantTourAndNormalize) {
  std::mt19937_64 rng(1);
  const Instance inst = testing_util::random_instance(rng, {4, 1, 3, 5, 10, 5.0});
  Solution s = Solution::empty(inst);
  s.routes[0] = {{2, 1}, {}, {4}};
  s.quantities[0] = {0, 1, 2, 0, 3};
  s.normalize();
  EXPECT_EQ(s.routes[0].size(), 2u);
  EXPECT_EQ(s.giant_tour(0), (std::vector<int>{2, 1, 4}));
  EXPECT_EQ(s.route_load(0, 0), 3);
  EXPECT_TRUE(s.visits(0, 4));
  EXPECT_FALSE(s.visits(0, 3));
}

}  // namespace
}  // namespace irp
