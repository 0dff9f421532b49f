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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "crowdcomp/assignment.hpp"
#include "crowdcomp/branch_and_bound.hpp"
#include "crowdcomp/nonsep.hpp"
#include "oracles.hpp"

namespace crowdcomp {
namespace {

constexpr double kFloor = kDefaultCompensationFloor;

NonSepConstraint cardinality(const ProblemInstance& inst, double limit) {
  const std::size_t cells = inst.num_tasks() * inst.num_drivers();
  return {std::vector<double>(cells, 1.0), std::vector<double>(cells, 0.0), limit};
}

NonSepConstraint budget(const ProblemInstance& inst, double limit) {
  const std::size_t cells = inst.num_tasks() * inst.num_drivers();
  return {std::vector<double>(cells, 0.0), std::vector<double>(cells, 1.0), limit};
}

NonSepConstraint random_constraint(std::mt19937_64& rng, const ProblemInstance& inst) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t cells = inst.num_tasks() * inst.num_drivers();
  NonSepConstraint con{std::vector<double>(cells), std::vector<double>(cells), 0.0};
  for (std::size_t k = 0; k < cells; ++k) {
    con.a[k] = u(rng) < 0.5 ? std::floor(3 * u(rng)) : 0.0;
    con.b[k] = u(rng) < 0.5 ? u(rng) : 0.0;
  }
  con.a[0] += 1.0;
  con.limit = 1.0 + 4.0 * u(rng);
  return con;
}

TEST(ObjectiveSplit, LinearIdentity) {
  PairParams pair;
  pair.alpha = 0.3;
  pair.beta = 0.05;
  const auto s = split_objective(pair, 20.0);
  EXPECT_TRUE(s.convex);
  EXPECT_NEAR(s.g, 14.0, 1e-12);
  EXPECT_EQ(s.f(0.0), 0.0);
  // At C = 4: P = 0.5, w = 2 + 10 = 12.
  EXPECT_NEAR(s.f(4.0) + s.g, 12.0, 1e-12);
}

TEST(ObjectiveSplit, IdentityHoldsOnRandomPairs) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const ProblemInstance inst = t % 2 ? testing::random_linear_instance(rng, 1, 1)
                                       : testing::random_logistic_instance(rng, 1, 1);
    const PairParams& pair = inst.pair(0, 0);
    const auto s = split_objective(pair, inst.tasks[0].penalized_cost);
    const double c = pair.cap * (0.001 + 0.999 * u(rng));
    EXPECT_NEAR(s.f(c) + s.g, testing::reference_weight(inst, 0, 0, c), 1e-9);
    EXPECT_EQ(s.f(0.0), 0.0);
  }
}

TEST(Grid, BreakpointShape) {
  std::mt19937_64 rng(2);
  const ProblemInstance lin = testing::random_linear_instance(rng, 2, 2);
  const ProblemInstance logi = testing::random_logistic_instance(rng, 2, 2);
  for (std::size_t K : {2u, 3u, 5u, 11u}) {
    for (const ProblemInstance* inst : {&lin, &logi}) {
      const PiecewiseGrid g = build_grid(*inst, K);
      for (std::size_t k = 0; k < g.pairs.size(); ++k) {
        const PairGrid& pg = g.pairs[k];
        ASSERT_EQ(pg.u.size(), K);
        EXPECT_EQ(pg.u.front(), 0.0);
        EXPECT_EQ(pg.u.back(), inst->pairs[k].cap);
        EXPECT_EQ(pg.f.front(), 0.0);
        for (std::size_t b = 1; b < K; ++b) EXPECT_LT(pg.u[b - 1], pg.u[b]);
        if (!pg.convex && K >= 3) {
          EXPECT_EQ(pg.u[1], kFloor);
        }
      }
    }
  }
  EXPECT_THROW(build_grid(lin, 1), InputError);
}

TEST(Grid, ConvexGridsNest) {
  std::mt19937_64 rng(3);
  const ProblemInstance inst = testing::random_linear_instance(rng, 2, 2);
  const PiecewiseGrid coarse = build_grid(inst, 3);
  const PiecewiseGrid fine = build_grid(inst, 5);
  for (std::size_t k = 0; k < coarse.pairs.size(); ++k) {
    for (std::size_t b = 0; b < 3; ++b) {
      EXPECT_NEAR(coarse.pairs[k].u[b], fine.pairs[k].u[2 * b], 1e-12);
    }
  }
}

TEST(Milp, StructureLinearTwoBreakpoints) {
  std::mt19937_64 rng(4);
  const ProblemInstance inst = testing::random_linear_instance(rng, 2, 2);
  NonSepOptions opt;
  opt.breakpoints = 2;
  const NonSepMilp milp = build_milp(inst, {}, opt);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(milp.layout.w_count[k], 2u);
    EXPECT_EQ(milp.layout.v_count[k], 0u);
    EXPECT_EQ(milp.layout.v_begin[k], MilpLayout::kAbsent);
  }
  // y and x binaries only.
  EXPECT_EQ(std::count(milp.mip.binary.begin(), milp.mip.binary.end(), 1), 6);
}

TEST(Milp, StructureLogisticFiveBreakpoints) {
  std::mt19937_64 rng(5);
  const ProblemInstance inst = testing::random_logistic_instance(rng, 2, 2);
  NonSepOptions opt;
  opt.breakpoints = 5;
  const NonSepMilp milp = build_milp(inst, {}, opt);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(milp.layout.w_count[k], 5u);
    EXPECT_EQ(milp.layout.v_count[k], 4u);
  }
  EXPECT_EQ(std::count(milp.mip.binary.begin(), milp.mip.binary.end(), 1), 2 + 4 + 16);
}

TEST(Milp, EncodedTwoPhasePlanIsFeasible) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const ProblemInstance inst = t % 2 ? testing::random_linear_instance(rng, 3, 3)
                                       : testing::random_logistic_instance(rng, 3, 3);
    const NonSepMilp milp = build_milp(inst, {}, {});
    const OfferPlan plan = solve_two_phase(inst);
    const auto x = encode_plan(milp, plan);
    EXPECT_TRUE(milp.mip.lp.is_feasible(x, 1e-9));
    EXPECT_TRUE(lp::is_integral(milp.mip, x, 1e-9));
    const OfferPlan back = decode_plan(milp, inst, x, kFloor);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(back.allocations[i].driver, plan.allocations[i].driver);
      EXPECT_NEAR(back.allocations[i].compensation, plan.allocations[i].compensation, 1e-9);
    }
  }
}

TEST(NonSep, ZeroCardinalityMeansAllCompany) {
  std::mt19937_64 rng(7);
  const ProblemInstance inst = testing::random_linear_instance(rng, 3, 3);
  const MilpResult r = solve_nonsep(inst, {cardinality(inst, 0.0)});
  EXPECT_EQ(r.status, lp::MipStatus::kOptimal);
  EXPECT_EQ(r.plan.num_offers(), 0u);
  EXPECT_NEAR(r.audited_cost, baseline_cost(inst), 1e-12);
}

TEST(NonSep, ZeroBudgetMeansAllCompany) {
  std::mt19937_64 rng(8);
  const ProblemInstance inst = testing::random_logistic_instance(rng, 2, 3);
  const MilpResult r = solve_nonsep(inst, {budget(inst, 0.0)});
  EXPECT_EQ(r.status, lp::MipStatus::kOptimal);
  EXPECT_EQ(r.plan.num_offers(), 0u);
}

TEST(NonSep, CardinalityOneKeepsBestSingleOffer) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const ProblemInstance inst = testing::random_linear_instance(rng, 2, 2);
    NonSepOptions opt;
    opt.breakpoints = 5;
    const MilpResult r = solve_nonsep(inst, {cardinality(inst, 1.0)}, opt);
    ASSERT_EQ(r.status, lp::MipStatus::kOptimal);
    EXPECT_LE(r.plan.num_offers(), 1u);
    const PiecewiseGrid grid = build_grid(inst, 5);
    EXPECT_NEAR(r.objective,
                testing::enumerate_piecewise(inst, grid, {cardinality(inst, 1.0)}, kFloor),
                1e-7);
  }
}

TEST(NonSep, InfeasibleConstraint) {
  std::mt19937_64 rng(10);
  const ProblemInstance inst = testing::random_linear_instance(rng, 2, 2);
  NonSepConstraint con = cardinality(inst, -1.0);
  const MilpResult r = solve_nonsep(inst, {con});
  EXPECT_EQ(r.status, lp::MipStatus::kInfeasible);
  EXPECT_EQ(r.plan.num_offers(), 0u);
}

TEST(NonSep, RejectsBadConstraints) {
  std::mt19937_64 rng(11);
  const ProblemInstance inst = testing::random_linear_instance(rng, 2, 2);
  NonSepConstraint zero = budget(inst, 1.0);
  std::fill(zero.b.begin(), zero.b.end(), 0.0);
  EXPECT_THROW(solve_nonsep(inst, {zero}), InputError);
  NonSepConstraint small{{1.0}, {0.0}, 1.0};
  EXPECT_THROW(solve_nonsep(inst, {small}), InputError);
  NonSepConstraint nan = budget(inst, std::nan(""));
  EXPECT_THROW(solve_nonsep(inst, {nan}), InputError);
}

TEST(NonSep, MatchesEnumerationUnderRandomConstraints) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    const ProblemInstance inst = t % 2 ? testing::random_linear_instance(rng, 2, 3)
                                       : testing::random_logistic_instance(rng, 2, 3);
    std::vector<NonSepConstraint> cons = {random_constraint(rng, inst)};
    if (t % 3 == 0) cons.push_back(random_constraint(rng, inst));
    NonSepOptions opt;
    opt.breakpoints = 4;
    const MilpResult r = solve_nonsep(inst, cons, opt);
    const double oracle =
        testing::enumerate_piecewise(inst, build_grid(inst, 4), cons, kFloor);
    ASSERT_EQ(r.status, lp::MipStatus::kOptimal);
    EXPECT_NEAR(r.objective, oracle, 1e-6 * std::max(1.0, oracle)) << t;
  }
}

TEST(BranchAndBound, IncumbentSatisfiesRowsAfterRounding) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const ProblemInstance inst = testing::random_logistic_instance(rng, 2, 3);
    const std::vector<NonSepConstraint> cons = {random_constraint(rng, inst),
                                                random_constraint(rng, inst)};
    NonSepOptions opt;
    opt.breakpoints = 4;
    const NonSepMilp milp = build_milp(inst, cons, opt);
    const lp::MipSolution sol = lp::branch_and_bound(milp.mip);
    ASSERT_TRUE(sol.has_incumbent);
    EXPECT_TRUE(milp.mip.lp.is_feasible(sol.values, 1e-9)) << t;
    EXPECT_TRUE(lp::is_integral(milp.mip, sol.values, 0.0)) << t;
    EXPECT_NEAR(milp.mip.lp.objective_value(sol.values), sol.objective, 1e-9) << t;
  }
}

TEST(NonSep, UnconstrainedApproachesTwoPhase) {
  std::mt19937_64 rng(13);
  const ProblemInstance inst = testing::random_linear_instance(rng, 3, 3);
  NonSepOptions opt;
  opt.breakpoints = 101;
  const MilpResult r = solve_nonsep(inst, {}, opt);
  const double two_phase = *solve_two_phase(inst).expected_cost;
  EXPECT_LE(std::abs(r.audited_cost - two_phase), 0.01 * two_phase);
  EXPECT_GE(r.audited_cost, two_phase - 1e-9);
}

TEST(NonSep, ConvexBinariesDoNotChangeOptimum) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 5; ++t) {
    const ProblemInstance inst = testing::random_linear_instance(rng, 2, 2);
    const std::vector<NonSepConstraint> cons = {random_constraint(rng, inst)};
    NonSepOptions a;
    a.breakpoints = 4;
    NonSepOptions b = a;
    b.keep_convex_binaries = true;
    EXPECT_NEAR(solve_nonsep(inst, cons, a).objective, solve_nonsep(inst, cons, b).objective,
                1e-7);
  }
}

TEST(NonSep, WarmStartDoesNotChangeOptimum) {
  std::mt19937_64 rng(15);
  const ProblemInstance inst = testing::random_logistic_instance(rng, 3, 2);
  const std::vector<NonSepConstraint> cons = {budget(inst, 3.0)};
  NonSepOptions a;
  a.breakpoints = 4;
  NonSepOptions b = a;
  b.warm_start = false;
  EXPECT_NEAR(solve_nonsep(inst, cons, a).objective, solve_nonsep(inst, cons, b).objective,
              1e-7);
}

TEST(NonSep, BoundsAreSound) {
  std::mt19937_64 rng(16);
  const ProblemInstance inst = testing::random_logistic_instance(rng, 3, 3);
  const std::vector<NonSepConstraint> cons = {budget(inst, 5.0)};
  NonSepOptions opt;
  opt.breakpoints = 4;
  std::vector<lp::NodeEvent> events;
  opt.search.on_node = [&](const lp::NodeEvent& e) { events.push_back(e); };
  const MilpResult r = solve_nonsep(inst, cons, opt);
  ASSERT_EQ(r.status, lp::MipStatus::kOptimal);
  ASSERT_FALSE(events.empty());
  ASSERT_TRUE(events.front().feasible);
  EXPECT_LE(events.front().lp_bound, r.objective + 1e-9);
  double last = std::numeric_limits<double>::infinity();
  for (const auto& e : events) {
    EXPECT_GE(e.incumbent, r.objective - 1e-9);
    EXPECT_LE(e.incumbent, last);
    last = e.incumbent;
  }
  EXPECT_LE(r.bound, r.objective + 1e-9);
  // The audited plan obeys the original constraint.
  double spent = 0.0;
  for (const Allocation& a : r.plan.allocations)
    if (a.offered()) spent += a.compensation;
  EXPECT_LE(spent, 5.0 + 1e-6);
}

TEST(NonSep, NodeLimitReportsBound) {
  std::mt19937_64 rng(17);
  const ProblemInstance inst = testing::random_logistic_instance(rng, 3, 3);
  NonSepOptions opt;
  opt.breakpoints = 6;
  opt.warm_start = false;
  opt.search.node_limit = 2;
  const MilpResult r = solve_nonsep(inst, {budget(inst, 4.0)}, opt);
  if (r.status == lp::MipStatus::kNodeLimit) {
    EXPECT_LE(r.bound, r.objective + 1e-9);
    EXPECT_LE(r.nodes_explored, 2u);
  } else {
    EXPECT_EQ(r.status, lp::MipStatus::kOptimal);
  }
}

TEST(BranchAndBound, SmallKnapsack) {
  // max 5a + 4b + 3c, 2a + 3b + c <= 5 -> a = c = 1 (8), or a = b = 1 (9).
  lp::MipProblem mip;
  mip.add_binary(-5);
  mip.add_binary(-4);
  mip.add_binary(-3);
  mip.lp.add_row({{0, 2}, {1, 3}, {2, 1}}, lp::RowSense::kLessEqual, 5);
  const auto s = lp::branch_and_bound(mip);
  ASSERT_EQ(s.status, lp::MipStatus::kOptimal);
  EXPECT_NEAR(s.objective, -9.0, 1e-9);
  EXPECT_TRUE(lp::is_integral(mip, s.values, 1e-9));
}

TEST(BranchAndBound, InfeasibleStartIgnored) {
  lp::MipProblem mip;
  mip.add_binary(1);
  mip.add_binary(1);
  mip.lp.add_row({{0, 1}, {1, 1}}, lp::RowSense::kGreaterEqual, 1);
  const auto s = lp::branch_and_bound(mip, {}, std::vector<double>{0.0, 0.0});
  EXPECT_NEAR(s.objective, 1.0, 1e-12);
}

}  // namespace
}  // namespace crowdcomp
