// Copyright 2026 The crowdcomp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "crowdcomp/acceptance.hpp"
#include "crowdcomp/model.hpp"

namespace crowdcomp {
namespace {

// Tasks along the x axis east of the store, so d_i is the offset.
ProblemInstance line_instance(const std::vector<double>& offsets,
                              const std::vector<double>& costs, double rho = 0.0) {
  ProblemInstance inst;
  inst.rho = rho;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    Task t;
    t.id = static_cast<int>(i);
    t.dest = {100.0 + offsets[i], 100.0};
    t.cost = costs[i];
    t.penalized_cost = (1.0 + rho) * costs[i];
    inst.tasks.push_back(t);
  }
  return inst;
}

void add_driver(ProblemInstance& inst, double alpha, double beta, double detour) {
  const std::size_t m = inst.num_drivers();
  std::vector<PairParams> pairs;
  for (std::size_t i = 0; i < inst.num_tasks(); ++i) {
    for (std::size_t j = 0; j < m; ++j) pairs.push_back(inst.pair(i, j));
    PairParams p;
    p.task = static_cast<int>(i);
    p.driver = static_cast<int>(m);
    p.alpha = alpha;
    p.beta = beta;
    p.detour = detour;
    p.cap = linear_cap(alpha, beta, inst.tasks[i].cost, inst.tasks[i].penalized_cost);
    pairs.push_back(p);
  }
  inst.drivers.push_back({static_cast<int>(m), {100.0, 100.0}});
  inst.pairs = std::move(pairs);
}

TEST(ExpectedCost, AllCompanySumsCosts) {
  const ProblemInstance inst = line_instance({1, 2}, {10, 20});
  EXPECT_EQ(expected_cost(all_company_plan(inst), inst), 30.0);
  EXPECT_EQ(expected_cost(all_company_plan(inst), inst), baseline_cost(inst));
}

TEST(ExpectedCost, CertainAcceptancePaysCompensation) {
  ProblemInstance inst = line_instance({1, 2}, {10, 10});
  add_driver(inst, 0.6, 0.1, 0.0);
  OfferPlan plan = all_company_plan(inst);
  plan.allocations[0] = Allocation::offer(0, 4.0);
  EXPECT_NEAR(expected_cost(plan, inst), 14.0, 1e-12);
}

TEST(ExpectedCost, LinearOfferMatchesMonteCarlo) {
  ProblemInstance inst = line_instance({1}, {12});
  add_driver(inst, 0.5, 0.05, 0.0);
  OfferPlan plan = all_company_plan(inst);
  plan.allocations[0] = Allocation::offer(0, 5.0);
  EXPECT_NEAR(expected_cost(plan, inst), 6.75, 1e-12);

  std::mt19937_64 rng(7);
  std::bernoulli_distribution accept(0.75);
  const int draws = 1000000;
  double total = 0.0;
  for (int k = 0; k < draws; ++k) total += accept(rng) ? 5.0 : 12.0;
  EXPECT_NEAR(total / draws, 6.75, 0.01);
}

TEST(ExpectedDistance, NoOffersIsTwiceDistance) {
  const ProblemInstance inst = line_instance({3, 4}, {3, 4});
  EXPECT_NEAR(expected_distance(all_company_plan(inst), inst), 14.0, 1e-12);
  EXPECT_EQ(expected_distance(all_company_plan(inst), inst), baseline_distance(inst));
}

TEST(ExpectedDistance, AcceptedZeroDetourAddsNothing) {
  ProblemInstance inst = line_instance({5}, {10});
  add_driver(inst, 0.6, 0.1, 0.0);
  OfferPlan plan = all_company_plan(inst);
  plan.allocations[0] = Allocation::offer(0, 4.0);
  EXPECT_NEAR(expected_distance(plan, inst), 0.0, 1e-12);
}

TEST(ExpectedDistance, PartialAcceptance) {
  ProblemInstance inst = line_instance({5}, {10});
  add_driver(inst, 0.5, 0.05, 2.0);  // P(2) = 0.6
  OfferPlan plan = all_company_plan(inst);
  plan.allocations[0] = Allocation::offer(0, 2.0);
  EXPECT_NEAR(expected_distance(plan, inst), 5.2, 1e-12);

  std::mt19937_64 rng(11);
  std::bernoulli_distribution accept(0.6);
  const int draws = 1000000;
  double total = 0.0;
  for (int k = 0; k < draws; ++k) total += accept(rng) ? 2.0 : 10.0;
  EXPECT_NEAR(total / draws, 5.2, 0.01);
}

TEST(Validate, EmptyPlanOnEmptyInstance) {
  EXPECT_TRUE(validate(OfferPlan{}, ProblemInstance{}).empty());
}

TEST(Validate, DriverOfferedTwice) {
  ProblemInstance inst = line_instance({1, 2}, {10, 10});
  add_driver(inst, 0.2, 0.05, 1.0);
  OfferPlan plan = all_company_plan(inst);
  plan.allocations[0] = Allocation::offer(0, 1.0);
  plan.allocations[1] = Allocation::offer(0, 1.0);
  const auto v = validate(plan, inst);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::kDriverReused);
  EXPECT_EQ(v[0].driver, 0);
  EXPECT_THROW(expected_cost(plan, inst), PlanValidationError);
}

TEST(Validate, CapExceeded) {
  ProblemInstance inst = line_instance({1}, {10});
  add_driver(inst, 0.2, 0.05, 1.0);
  OfferPlan plan = all_company_plan(inst);
  plan.allocations[0] = Allocation::offer(0, inst.pair(0, 0).cap + 1.0);
  const auto v = validate(plan, inst);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::kCapExceeded);
  try {
    expected_cost(plan, inst);
    FAIL() << "expected a validation error";
  } catch (const PlanValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("task 0"), std::string::npos) << e.what();
  }
}

TEST(Validate, ShapeUnknownDriverAndZeroCompensation) {
  ProblemInstance inst = line_instance({1, 2}, {10, 10});
  add_driver(inst, 0.2, 0.05, 1.0);
  OfferPlan plan = all_company_plan(inst);
  plan.allocations[0] = Allocation::offer(3, 1.0);
  plan.allocations[1] = Allocation::offer(0, 0.0);
  const auto v = validate(plan, inst);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].kind, Violation::Kind::kUnknownDriver);
  EXPECT_EQ(v[1].kind, Violation::Kind::kNonPositiveCompensation);
  OfferPlan short_plan;
  EXPECT_EQ(validate(short_plan, inst).at(0).kind, Violation::Kind::kShape);
}

TEST(ExpectedCost, ReplacingOfferByCompanyIsLinear) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    ProblemInstance inst = line_instance({1, 2, 3}, {5 + 20 * u(rng), 5 + 20 * u(rng),
                                                     5 + 20 * u(rng)}, 0.2);
    add_driver(inst, 0.5 * u(rng), 0.01 + 0.1 * u(rng), 1.0);
    add_driver(inst, 0.5 * u(rng), 0.01 + 0.1 * u(rng), 1.0);
    OfferPlan plan = all_company_plan(inst);
    plan.allocations[0] = Allocation::offer(1, inst.pair(0, 1).cap * (0.1 + 0.9 * u(rng)));
    plan.allocations[2] = Allocation::offer(0, inst.pair(2, 0).cap * (0.1 + 0.9 * u(rng)));
    const double full = expected_cost(plan, inst);
    const double c = plan.allocations[2].compensation;
    const double p = acceptance_probability(inst.pair(2, 0), c);
    OfferPlan reduced = plan;
    reduced.allocations[2] = Allocation::company();
    const double delta = inst.tasks[2].cost - (p * c + (1 - p) * inst.tasks[2].penalized_cost);
    EXPECT_NEAR(expected_cost(reduced, inst) - full, delta, 1e-10);
  }
}

TEST(EvaluatePlan, FillsBothMetrics) {
  ProblemInstance inst = line_instance({5}, {10});
  add_driver(inst, 0.5, 0.05, 2.0);
  OfferPlan plan = all_company_plan(inst);
  plan.allocations[0] = Allocation::offer(0, 2.0);
  evaluate_plan(plan, inst);
  ASSERT_TRUE(plan.expected_cost && plan.expected_distance);
  EXPECT_NEAR(*plan.expected_cost, 0.6 * 2 + 0.4 * 10, 1e-12);
  EXPECT_NEAR(acceptance_probabilities(plan, inst)[0], 0.6, 1e-15);
}

TEST(TabulatedCurve, InterpolatesAndHolds) {
  TabulatedCurve curve{{1.0, 3.0}, {0.2, 0.6}};
  EXPECT_EQ(curve(0.0), 0.0);
  EXPECT_NEAR(curve(0.5), 0.1, 1e-15);
  EXPECT_NEAR(curve(2.0), 0.4, 1e-15);
  EXPECT_EQ(curve(10.0), 0.6);
}

}  // namespace
}  // namespace crowdcomp
