#include "irp/solution_io.hpp"

#include <gtest/gtest.h>

#include <random>

#include "mutations.hpp"
#include "test_util.hpp"

namespace irp {
namespace {

using testing_util::mutation_instance;
using testing_util::mutation_solution;

TEST(Validator, BaseSolutionPasses) {
  const Instance inst = mutation_instance();
  const SolutionRecord rec = make_record(inst, mutation_solution(inst), 0.0);
  const ValidationReport report = validate(inst, rec);
  EXPECT_TRUE(report.ok()) << report.to_text();
  ASSERT_TRUE(report.cost.has_value());
  EXPECT_DOUBLE_EQ(report.cost->total, evaluate(inst, mutation_solution(inst), 0.0).total);
}

TEST(Validator, EachMutationTripsExactlyItsFamily) {
  const Instance inst = mutation_instance();
  const auto cases = testing_util::mutations();
  ASSERT_GE(cases.size(), 10u);
  for (const auto& m : cases) {
    SolutionRecord rec = make_record(inst, mutation_solution(inst), 0.0);
    m.apply(rec);
    if (m.refresh) refresh_derived_fields(inst, rec);
    const ValidationReport report = validate(inst, rec);
    EXPECT_EQ(report.failed(), std::vector<ConstraintFamily>{m.family}) << m.name << "\n" << report.to_text();
    EXPECT_FALSE(report[m.family].counterexample.empty()) << m.name;
  }
}

TEST(Validator, MaxLevelMessageNamesCapacity) {
  const Instance inst = mutation_instance();
  SolutionRecord rec = make_record(inst, mutation_solution(inst), 0.0);
  testing_util::set_delivery(rec.days[1][1], 2, 6);
  refresh_derived_fields(inst, rec);
  const ValidationReport report = validate(inst, rec);
  EXPECT_NE(report[ConstraintFamily::kMaxLevel].counterexample.find("exceeds capacity"), std::string::npos);
}

TEST(Validator, NegativeSupplierStockIsOnlyAWarning) {
  Instance inst = mutation_instance();
  inst.supplier.initial_stock = 0;
  inst.supplier.production = {0, 0};
  const ValidationReport report = validate(inst, make_record(inst, mutation_solution(inst), 0.0));
  EXPECT_TRUE(report.ok());
  EXPECT_FALSE(report.warnings.empty());
}

TEST(Validator, WrongDayCount) {
  const Instance inst = mutation_instance();
  SolutionRecord rec = make_record(inst, mutation_solution(inst), 0.0);
  rec.days.pop_back();
  EXPECT_FALSE(validate(inst, rec).ok());
}

TEST(SolutionRecord, RoundTripsThroughText) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = testing_util::random_instance(rng, {5, 3, 2, 7, 10, trial % 2 ? kNoStockout : 4.0});
    const Solution s = testing_util::random_solution(rng, inst);
    const SolutionRecord rec = make_record(inst, s, 1.5);
    const std::string text = write_record(rec);
    const SolutionRecord back = read_record(text);
    EXPECT_EQ(write_record(back), text);
    Solution rebuilt = to_solution(inst, back);
    EXPECT_EQ(rebuilt, s);
    // Random plans may overload a vehicle; nothing else may fail.
    const ValidationReport report = validate(inst, back);
    const bool overloaded = !evaluate(inst, s, 0.0).capacity_feasible();
    EXPECT_EQ(report.failed(), overloaded ? std::vector<ConstraintFamily>{ConstraintFamily::kVehicleCapacity}
                                          : std::vector<ConstraintFamily>{})
        << report.to_text();
  }
}

TEST(SolutionRecord, MalformedDocuments) {
  EXPECT_THROW(read_record("{"), ParseError);
  EXPECT_THROW(read_record("[]"), ParseError);
  EXPECT_THROW(read_record(R"({"days": 3})"), ParseError);
}

TEST(SolutionRecord, ToSolutionRejectsOpenPaths) {
  const Instance inst = mutation_instance();
  SolutionRecord rec = make_record(inst, mutation_solution(inst), 0.0);
  rec.days[0][1].arcs.pop_back();
  EXPECT_THROW(to_solution(inst, rec), std::invalid_argument);
}

}  // namespace
}  // namespace irp
