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

// CDCAP with linear side constraints that couple offers and compensations
// across pairs (budgets, cardinality limits):
//
//     sum_ij a_ij x_ij + sum_ij b_ij C_ij <= B
//
// The pairwise separation no longer applies, so the expected cost is split
// per pair into f(C) + g * x and f is replaced by its piecewise-linear
// interpolation over breakpoints u^1 = 0 < ... < u^K = U. Convex pieces
// (linear acceptance) need only the interpolation weights w^k; nonconvex
// pieces also get adjacency binaries v^k. The resulting MILP is solved by
// branch and bound.
//
// Offers must carry at least the compensation floor, enforced by the row
// floor * x_ij <= C_ij.

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "crowdcomp/acceptance.hpp"
#include "crowdcomp/branch_and_bound.hpp"
#include "crowdcomp/model.hpp"

namespace crowdcomp {

struct NonSepConstraint {
  std::vector<double> a;  // task-major |I| x |J|, coefficients of x_ij
  std::vector<double> b;  // task-major |I| x |J|, coefficients of C_ij
  double limit = 0.0;     // B
};

// Throws InputError when a table has the wrong size, holds a non-finite
// value, or the constraint has no nonzero coefficient.
void validate_constraints(const std::vector<NonSepConstraint>& constraints,
                          const ProblemInstance& inst);

struct ObjectiveSplit {
  std::function<double(double)> f;  // f(0) = 0
  double g = 0.0;                   // cost of x_ij = 1 on top of f
  bool convex = false;
};

// f(C) + g = P(C) * C + (1 - P(C)) * c' for C > 0.
ObjectiveSplit split_objective(const PairParams& pair, double c_prime);

struct PairGrid {
  std::vector<double> u;  // breakpoints, strictly increasing, u[0] = 0
  std::vector<double> f;  // f at each breakpoint
  double g = 0.0;
  bool convex = false;
  bool offer_allowed = true;  // false when the cap is below the floor
};

struct PiecewiseGrid {
  std::size_t tasks = 0;
  std::size_t drivers = 0;
  std::vector<PairGrid> pairs;  // task-major

  const PairGrid& at(std::size_t i, std::size_t j) const {
    return pairs[i * drivers + j];
  }
};

// Breakpoints: uniform on [0, U] for convex pairs. Nonconvex pairs keep
// u^1 = 0 and u^2 = floor (when K >= 3) so the jump of P at zero sits in its
// own segment, and spread the remaining K - 2 points uniformly over
// [floor, U]. Grids nest for K - 1 (convex) or K - 2 (nonconvex) dividing
// one another.
PiecewiseGrid build_grid(const ProblemInstance& inst, std::size_t breakpoints,
                         double floor = kDefaultCompensationFloor);

struct NonSepOptions {
  std::size_t breakpoints = 11;
  double floor = kDefaultCompensationFloor;
  // Keep adjacency binaries for convex pairs as well.
  bool keep_convex_binaries = false;
  // Start the search from the two-phase plan when it satisfies the
  // constraints.
  bool warm_start = true;
  lp::BranchAndBoundOptions search;
};

// Column indices of the MILP. Absent columns hold kAbsent.
struct MilpLayout {
  static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  std::size_t tasks = 0;
  std::size_t drivers = 0;
  std::vector<std::size_t> y;        // per task
  std::vector<std::size_t> x;        // per pair
  std::vector<std::size_t> w_begin;  // per pair, K consecutive columns
  std::vector<std::size_t> w_count;
  std::vector<std::size_t> v_begin;  // per pair, K - 1 columns or kAbsent
  std::vector<std::size_t> v_count;
};

struct NonSepMilp {
  lp::MipProblem mip;
  MilpLayout layout;
  PiecewiseGrid grid;
};

NonSepMilp build_milp(const ProblemInstance& inst,
                      const std::vector<NonSepConstraint>& constraints,
                      const NonSepOptions& options = {});

// MILP point for a plan: each offer's compensation is written as a blend of
// its two surrounding breakpoints.
std::vector<double> encode_plan(const NonSepMilp& milp, const OfferPlan& plan);

// Plan from a MILP point. Compensations are clamped to [floor, cap].
OfferPlan decode_plan(const NonSepMilp& milp, const ProblemInstance& inst,
                      const std::vector<double>& values, double floor);

struct MilpResult {
  OfferPlan plan;               // evaluated with the true expected cost
  lp::MipStatus status = lp::MipStatus::kInfeasible;
  double objective = 0.0;       // piecewise-linear MILP objective
  double bound = 0.0;
  double audited_cost = 0.0;    // exact expected cost of `plan`
  std::size_t nodes_explored = 0;
};

MilpResult solve_nonsep(const ProblemInstance& inst,
                        const std::vector<NonSepConstraint>& constraints,
                        const NonSepOptions& options = {});

}  // namespace crowdcomp
