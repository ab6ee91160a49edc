#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "irp/instance.hpp"
#include "irp/solution.hpp"

namespace irp {

// Explicit, arc-based description of a solution as stored on disk. Every
// derived quantity (loads, inventory levels) is a claim that the validator
// checks against the rest of the record, so corrupt files are detectable.
struct RouteRecord {
  int vehicle = 0;
  std::vector<std::pair<int, int>> arcs;
  long load = 0;
  std::vector<std::pair<int, int>> deliveries;  // (retailer, quantity)
};

struct SolutionRecord {
  std::string instance;
  double omega = 0.0;
  std::vector<std::vector<RouteRecord>> days;
  std::vector<std::vector<int>> inventory;  // [retailer][day], retailer index 0 unused
  std::vector<std::vector<int>> stockout;   // [retailer][day]
  std::vector<long> supplier_inventory;     // [day]
  std::optional<CostBreakdown> cost;
};

SolutionRecord make_record(const Instance& instance, const Solution& solution, double omega);

// Recomputes loads and inventory claims from the deliveries.
void refresh_derived_fields(const Instance& instance, SolutionRecord& record);

// Rebuilds a Solution by walking each route's arcs from the depot. Throws
// std::invalid_argument when the arcs do not describe depot-closed paths.
Solution to_solution(const Instance& instance, const SolutionRecord& record);

std::string write_record(const SolutionRecord& record);
// Throws ParseError on malformed documents.
SolutionRecord read_record(std::string_view text);

enum class ConstraintFamily {
  kInventoryBalance,
  kMaxLevel,
  kVisitDelivery,
  kVehicleCapacity,
  kSingleVisit,
  kRouteFlow,
  kLoadSubtour,
  kNonnegativity,
  kNoStockout,
};
inline constexpr std::size_t kNumFamilies = 9;

std::string_view family_name(ConstraintFamily family);

struct FamilyResult {
  ConstraintFamily family;
  bool passed = true;
  std::string counterexample;
};

struct ValidationReport {
  std::array<FamilyResult, kNumFamilies> families{};
  std::vector<std::string> warnings;
  std::optional<CostBreakdown> cost;  // recomputed, when the routes are well formed

  bool ok() const;
  const FamilyResult& operator[](ConstraintFamily f) const { return families[static_cast<std::size_t>(f)]; }
  std::vector<ConstraintFamily> failed() const;
  std::string to_text() const;
};

ValidationReport validate(const Instance& instance, const SolutionRecord& record);

}  // namespace irp
