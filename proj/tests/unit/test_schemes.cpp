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
#include <vector>

#include <gtest/gtest.h>

#include "crowdcomp/assignment.hpp"
#include "crowdcomp/model.hpp"
#include "crowdcomp/schemes.hpp"
#include "oracles.hpp"

namespace crowdcomp {
namespace {

// One task at distance d_i east of the store and one driver placed so that
// the driver is d_j from the store and d_ij from the task.
ProblemInstance triangle(double d_i, double d_j, double d_ij) {
  ProblemInstance inst;
  Task t;
  t.dest = {100.0 + d_i, 100.0};
  t.cost = d_i;
  t.penalized_cost = d_i;
  inst.tasks.push_back(t);
  const double x = (d_j * d_j - d_ij * d_ij + d_i * d_i) / (2.0 * d_i);
  const double y = std::sqrt(d_j * d_j - x * x);
  inst.drivers.push_back({0, {100.0 + x, 100.0 + y}});
  PairParams p;
  p.alpha = 0.1;
  p.beta = 0.05;
  p.cap = d_i;
  p.detour = d_i + distance(t.dest, inst.drivers[0].dest) - inst.driver_distance(0);
  inst.pairs.push_back(p);
  return inst;
}

TEST(SchemeCompensation, Examples) {
  const ProblemInstance inst = triangle(8.0, 6.0, 4.0);
  EXPECT_EQ(scheme_compensation({SchemeKind::kFlat, 3.0}, inst, 0, 0), 3.0);
  EXPECT_NEAR(scheme_compensation({SchemeKind::kDistance, 0.5}, inst, 0, 0), 4.0, 1e-12);
  const ProblemInstance tri = triangle(5.0, 6.0, 4.0);
  EXPECT_NEAR(tri.pair(0, 0).detour, 3.0, 1e-12);
  EXPECT_NEAR(scheme_compensation({SchemeKind::kDetour, 1.0}, tri, 0, 0), 3.0, 1e-12);
}

TEST(SchemeWeights, ClampsAndRecordsRequested) {
  const ProblemInstance inst = triangle(8.0, 6.0, 4.0);
  const WeightMatrix w = scheme_weights({SchemeKind::kFlat, 50.0}, inst);
  EXPECT_EQ(w.compensation[0], 8.0);
  EXPECT_EQ(w.requested[0], 50.0);
  EXPECT_EQ(w.provenance, "flat");
  const WeightMatrix tiny = scheme_weights({SchemeKind::kFlat, 1e-9}, inst);
  EXPECT_EQ(tiny.compensation[0], kDefaultCompensationFloor);
  const WeightMatrix zero = scheme_weights({SchemeKind::kFlat, 0.0}, inst);
  EXPECT_EQ(zero.compensation[0], 0.0);
  EXPECT_FALSE(solve_assignment(zero).allocations[0].offered());
  EXPECT_THROW(scheme_weights({SchemeKind::kFlat, -1.0}, inst), InputError);
}

TEST(SchemeWeights, RespectCaps) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int t = 0; t < 100; ++t) {
    const ProblemInstance inst = testing::random_linear_instance(rng, 3, 4);
    for (SchemeKind kind : {SchemeKind::kDetour, SchemeKind::kDistance, SchemeKind::kFlat}) {
      const WeightMatrix w = scheme_weights({kind, u(rng)}, inst);
      for (std::size_t k = 0; k < inst.pairs.size(); ++k) {
        EXPECT_GE(w.compensation[k], 0.0);
        EXPECT_LE(w.compensation[k], inst.pairs[k].cap);
      }
    }
  }
}

TEST(PMax, Examples) {
  ProblemInstance inst = triangle(4.0, 3.0, 2.0);
  // Second task at d = 3.
  Task t;
  t.dest = {100.0, 103.0};
  t.cost = t.penalized_cost = 3.0;
  inst.tasks.push_back(t);
  PairParams p = inst.pairs[0];
  p.task = 1;
  p.detour = 0.0;
  inst.pairs.push_back(p);
  EXPECT_NEAR(p_max(SchemeKind::kDistance, inst, {2.0, 6.0}), 2.0, 1e-12);
  EXPECT_EQ(p_max(SchemeKind::kFlat, inst, {2.0, 6.0}), 6.0);
  // The zero-detour pair is skipped.
  EXPECT_NEAR(p_max(SchemeKind::kDetour, inst, {2.0, 6.0}), 2.0 / inst.pairs[0].detour, 1e-12);
  inst.pairs[0].detour = 0.0;
  EXPECT_THROW(p_max(SchemeKind::kDetour, inst, {2.0, 6.0}), InputError);
}

TEST(Tune, NeverBeneficialGivesCompanyCost) {
  ProblemInstance inst = triangle(8.0, 6.0, 4.0);
  // Acceptance too low to ever pay off: w(C) >= c' for every C.
  inst.pairs[0].alpha = 0.0;
  inst.pairs[0].beta = 1e-6;
  inst.pairs[0].cap = 8.0;
  const TuneResult r = tune_scheme(SchemeKind::kFlat, inst);
  EXPECT_LE(r.objective, 8.0);
  EXPECT_GE(r.objective, 8.0 - 1e-4);
}

TEST(Tune, SinglePairFlatRecoversIndividualOptimum) {
  ProblemInstance inst = triangle(30.0, 20.0, 15.0);
  inst.pairs[0].alpha = 0.1;
  inst.pairs[0].beta = 0.02;
  inst.pairs[0].cap = 30.0;
  inst.tasks[0].penalized_cost = 33.0;
  const TuneResult r = tune_scheme(SchemeKind::kFlat, inst);
  const double c_star = 33.0 / 2 - 0.1 / (2 * 0.02);
  EXPECT_NEAR(r.p, c_star, 1e-4 * c_star);
  const OfferPlan ind = solve_two_phase(inst);
  EXPECT_NEAR(r.objective, *ind.expected_cost, 1e-8);
}

TEST(Tune, RefinementNeverRegresses) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const ProblemInstance inst = t % 2 ? testing::random_linear_instance(rng, 4, 4)
                                       : testing::random_logistic_instance(rng, 4, 4);
    for (SchemeKind kind : {SchemeKind::kDetour, SchemeKind::kDistance, SchemeKind::kFlat}) {
      const TuneResult r = tune_scheme(kind, inst);
      ASSERT_EQ(r.grid.size(), 26u);
      for (const GridPoint& g : r.grid) EXPECT_LE(r.objective, g.objective + 1e-12);
      EXPECT_NEAR(r.objective, *r.plan.expected_cost, 1e-9);
      EXPECT_TRUE(validate(r.plan, inst).empty());
    }
  }
}

TEST(Tune, IndividualDominates) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 40; ++t) {
    const ProblemInstance inst = t % 2 ? testing::random_linear_instance(rng, 4, 3)
                                       : testing::random_logistic_instance(rng, 4, 3);
    const double ind = tune_scheme(SchemeKind::kIndividual, inst).objective;
    EXPECT_TRUE(std::isnan(tune_scheme(SchemeKind::kIndividual, inst).p));
    for (SchemeKind kind : {SchemeKind::kDetour, SchemeKind::kDistance, SchemeKind::kFlat}) {
      EXPECT_LE(ind, tune_scheme(kind, inst).objective + 1e-9);
    }
  }
}

TEST(SchemeKindNames, RoundTrip) {
  for (SchemeKind k : kAllSchemes) EXPECT_EQ(parse_scheme_kind(to_string(k)), k);
  EXPECT_THROW(parse_scheme_kind("bogus"), InputError);
}

}  // namespace
}  // namespace crowdcomp
