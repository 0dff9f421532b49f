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
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "crowdcomp/assignment.hpp"
#include "crowdcomp/simplex.hpp"

namespace crowdcomp::lp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Simplex, BoundedSingleColumn) {
  LinearProgram lp;
  lp.add_column(1.0, 0.0, 5.0);
  const auto s = simplex_solve(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_EQ(s.values[0], 0.0);
  lp.cost[0] = -2.0;
  const auto t = simplex_solve(lp);
  EXPECT_EQ(t.values[0], 5.0);
  EXPECT_EQ(t.objective, -10.0);
}

TEST(Simplex, Transportation) {
  // Supplies 20, 30; demands 25, 25; costs [[2, 3], [4, 1]].
  // Optimum: x00 = 20, x10 = 5, x11 = 25 -> 40 + 20 + 25 = 85.
  LinearProgram lp;
  const double costs[4] = {2, 3, 4, 1};
  for (double c : costs) lp.add_column(c, 0.0, kInf);
  lp.add_row({{0, 1}, {1, 1}}, RowSense::kLessEqual, 20);
  lp.add_row({{2, 1}, {3, 1}}, RowSense::kLessEqual, 30);
  lp.add_row({{0, 1}, {2, 1}}, RowSense::kEqual, 25);
  lp.add_row({{1, 1}, {3, 1}}, RowSense::kGreaterEqual, 25);
  const auto s = simplex_solve(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 85.0, 1e-9);
  EXPECT_TRUE(lp.is_feasible(s.values, 1e-9));
}

TEST(Simplex, BealeCyclingExample) {
  // Cycles under the textbook rule without an anti-cycling fallback.
  // Optimum at x = (1, 0, 1, 0).
  LinearProgram lp;
  lp.add_column(-0.75, 0.0, kInf);
  lp.add_column(20.0, 0.0, kInf);
  lp.add_column(-0.5, 0.0, kInf);
  lp.add_column(6.0, 0.0, kInf);
  lp.add_row({{0, 0.25}, {1, -8}, {2, -1}, {3, 9}}, RowSense::kLessEqual, 0);
  lp.add_row({{0, 0.5}, {1, -12}, {2, -0.5}, {3, 3}}, RowSense::kLessEqual, 0);
  lp.add_row({{2, 1}}, RowSense::kLessEqual, 1);
  SimplexOptions opt;
  opt.degenerate_pivots_before_bland = 1;
  const auto s = simplex_solve(lp, opt);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, -1.25, 1e-12);
  const auto d = simplex_solve(lp);
  EXPECT_NEAR(d.objective, -1.25, 1e-12);
}

TEST(Simplex, DetectsInfeasible) {
  LinearProgram lp;
  lp.add_column(1.0, 0.0, 1.0);
  lp.add_column(1.0, 0.0, 1.0);
  lp.add_row({{0, 1}, {1, 1}}, RowSense::kGreaterEqual, 3);
  EXPECT_EQ(simplex_solve(lp).status, LpStatus::kInfeasible);
}

TEST(Simplex, DetectsUnbounded) {
  LinearProgram lp;
  lp.add_column(-1.0, 0.0, kInf);
  lp.add_column(0.0, 0.0, 1.0);
  lp.add_row({{0, 1}, {1, -1}}, RowSense::kGreaterEqual, 0);
  EXPECT_EQ(simplex_solve(lp).status, LpStatus::kUnbounded);
}

TEST(Simplex, UpperBoundedAndNegativeLowerColumns) {
  // min x - y, x in [-3, 2], y in (-inf, 4], x + y >= 1.
  LinearProgram lp;
  lp.add_column(1.0, -3.0, 2.0);
  lp.add_column(-1.0, -kInf, 4.0);
  lp.add_row({{0, 1}, {1, 1}}, RowSense::kGreaterEqual, 1);
  const auto s = simplex_solve(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, -7.0, 1e-12);
}

TEST(Simplex, OverrideBounds) {
  LinearProgram lp;
  lp.add_column(-1.0, 0.0, 10.0);
  const std::vector<double> lo = {0.0}, hi = {3.0};
  EXPECT_EQ(simplex_solve(lp, lo, hi).objective, -3.0);
  const std::vector<double> bad = {0.0, 1.0};
  EXPECT_THROW(simplex_solve(lp, bad, hi), std::invalid_argument);
}

TEST(Simplex, RejectsUnknownColumnInRow) {
  LinearProgram lp;
  lp.add_column(1.0, 0.0, 1.0);
  EXPECT_THROW(lp.add_row({{3, 1.0}}, RowSense::kEqual, 0), std::out_of_range);
}

TEST(Simplex, AssignmentRelaxationIsIntegral) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t % 4, m = 1 + (t / 4) % 4;
    std::vector<double> weight(n * m), company(n);
    for (double& x : weight) x = u(rng);
    for (double& x : company) x = u(rng);
    LinearProgram lp;
    for (std::size_t k = 0; k < n * m; ++k) lp.add_column(weight[k], 0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) lp.add_column(company[i], 0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Term> terms;
      for (std::size_t j = 0; j < m; ++j) terms.push_back({i * m + j, 1.0});
      terms.push_back({n * m + i, 1.0});
      lp.add_row(terms, RowSense::kEqual, 1.0);
    }
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<Term> terms;
      for (std::size_t i = 0; i < n; ++i) terms.push_back({i * m + j, 1.0});
      lp.add_row(terms, RowSense::kLessEqual, 1.0);
    }
    const auto s = simplex_solve(lp);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    for (double v : s.values) EXPECT_TRUE(std::abs(v) < 1e-9 || std::abs(v - 1) < 1e-9);

    WeightMatrix w;
    w.tasks = n;
    w.drivers = m;
    w.weight = weight;
    w.compensation.assign(n * m, 1.0);
    w.probability.assign(n * m, 0.5);
    w.company = company;
    EXPECT_NEAR(s.objective, assignment_objective(w, solve_assignment(w)), 1e-9);
  }
}

}  // namespace
}  // namespace crowdcomp::lp
