#include "irp/generator.hpp"

#include <cmath>
#include <random>

namespace irp {

std::string cost_class_name(CostClass c) { return c == CostClass::kHigh ? "HC" : "LC"; }

Instance generate_instance(const GeneratorParams& params) {
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> coord(0.0, 500.0);
  std::uniform_int_distribution<int> demand(10, 100);
  std::uniform_int_distribution<int> factor(2, 3);
  const bool high = params.cost_class == CostClass::kHigh;
  std::uniform_real_distribution<double> holding(high ? 0.1 : 0.01, high ? 0.5 : 0.05);

  Instance inst;
  inst.name = params.name.empty() ? "gen-n" + std::to_string(params.retailers) + "-H" + std::to_string(params.horizon) +
                                        "-" + cost_class_name(params.cost_class) + "-K" +
                                        std::to_string(params.vehicles) + "-s" + std::to_string(params.seed)
                                  : params.name;
  inst.horizon = params.horizon;
  inst.vehicles = params.vehicles;
  inst.stockout_factor = params.stockout_factor;
  inst.supplier.location = {coord(rng), coord(rng)};
  std::vector<Point> coords{inst.supplier.location};
  long total_demand = 0;
  for (int i = 0; i < params.retailers; ++i) {
    Retailer r;
    r.location = {coord(rng), coord(rng)};
    const int d = demand(rng);
    r.demand.assign(static_cast<std::size_t>(params.horizon), d);
    r.max_level = factor(rng) * d;
    r.initial_stock = r.max_level - d;
    // Two decimals, as in the published files.
    r.holding_cost = std::round(holding(rng) * 100.0) / 100.0;
    total_demand += d;
    coords.push_back(r.location);
    inst.retailers.push_back(std::move(r));
  }
  inst.supplier.initial_stock = static_cast<int>(total_demand);
  inst.supplier.production.assign(static_cast<std::size_t>(params.horizon), static_cast<int>(total_demand));
  inst.supplier.holding_cost.assign(static_cast<std::size_t>(params.horizon), high ? 0.3 : 0.03);
  inst.capacity = static_cast<int>(1.5 * static_cast<double>(total_demand)) / params.vehicles;
  inst.cost = build_cost_matrix(coords, CostRounding::kNearestInteger);
  inst.validate();
  return inst;
}

}  // namespace irp
