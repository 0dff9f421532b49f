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

// Second phase of the exact solver: with compensations fixed, choosing which
// task goes to which driver (or to the company) is a rectangular assignment
// problem. Each task row gets one private "company" column carrying c_i, so
// a single min-cost matching covers the fallback as well.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "crowdcomp/acceptance.hpp"
#include "crowdcomp/model.hpp"

namespace crowdcomp {

struct WeightMatrix {
  std::size_t tasks = 0;
  std::size_t drivers = 0;
  // Task-major |I| x |J| tables.
  std::vector<double> weight;        // expected cost of each offer
  std::vector<double> compensation;  // compensation behind each weight
  std::vector<double> probability;   // acceptance at that compensation
  std::vector<double> company;       // c_i
  // Pre-clamp compensation when a scheme value was clipped to the feasible
  // range; empty when compensations were used as given.
  std::vector<double> requested;
  std::string provenance;

  double at(std::size_t i, std::size_t j) const {
    return weight[i * drivers + j];
  }
};

// Weights of the given task-major compensation table. Throws InputError
// naming the pair when a compensation lies outside [0, cap].
WeightMatrix build_weights(const ProblemInstance& inst,
                           const std::vector<double>& compensations,
                           std::string provenance = "given");

// Weights at each pair's optimal compensation.
WeightMatrix individual_weights(const ProblemInstance& inst,
                                double floor = kDefaultCompensationFloor);

// Minimum-cost allocation for the weights. Each driver gets at most one
// task; each task goes to one driver or to the company. The plan's
// expected_cost holds the objective; expected_distance is left unset.
OfferPlan solve_assignment(const WeightMatrix& weights);

// Objective value of a plan under the weights.
double assignment_objective(const WeightMatrix& weights, const OfferPlan& plan);

// Optimal compensations, then optimal assignment. Returns a fully evaluated
// plan.
OfferPlan solve_two_phase(const ProblemInstance& inst,
                          double floor = kDefaultCompensationFloor);

// Dense min-cost assignment of every row to a distinct column (rows <= cols).
// Returns the column of each row. Exposed for tests.
std::vector<int> min_cost_assignment(const std::vector<double>& cost,
                                     std::size_t rows, std::size_t cols);

}  // namespace crowdcomp
