#pragma once

#include <cstdint>
#include <string>

#include "irp/instance.hpp"

namespace irp {

enum class CostClass { kLow, kHigh };

// Random instances shaped like the classic small/large benchmark families:
// constant demand in [10, 100], U = g * d with g in {2, 3}, I0 = U - d,
// holding in [0.01, 0.05] (low) or [0.1, 0.5] (high), supplier holding 0.03
// or 0.3, coordinates in [0, 500]^2, total fleet capacity 1.5 * sum(d)
// split evenly over the vehicles, costs rounded to the nearest integer.
struct GeneratorParams {
  int retailers = 10;
  int horizon = 3;
  int vehicles = 1;
  CostClass cost_class = CostClass::kLow;
  double stockout_factor = kNoStockout;
  std::uint64_t seed = 1;
  std::string name;  // defaults to a name built from the parameters
};

Instance generate_instance(const GeneratorParams& params);

std::string cost_class_name(CostClass c);  // "LC" / "HC"

}  // namespace irp
