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

// Acceptance probabilities and optimal per-pair compensations.
//
// A driver offered compensation C accepts with probability P(C), P(0) = 0.
// Offering task i to driver j at C costs, in expectation,
//
//     w(C) = P(C) * C + (1 - P(C)) * c'_i,
//
// and because the pair does not interact with any other pair, the best offer
// minimizes P(C) * (C - c'_i) over the feasible compensations. Closed forms
// exist for the linear and logistic models; other curves fall back to a grid
// search with golden-section refinement.
//
// P jumps at C = 0, so when the objective keeps decreasing toward 0+ the
// infimum is not attained. Offers are therefore restricted to [floor, cap]
// with a small configurable compensation floor.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "crowdcomp/model.hpp"

namespace crowdcomp {

inline constexpr double kDefaultCompensationFloor = 1e-6;

double linear_probability(double alpha, double beta, double compensation);
double logistic_probability(double gamma, double delta, double compensation);
double acceptance_probability(const PairParams& pair, double compensation);

// Expected cost of an offer accepted with probability p.
inline double offer_weight(double p, double compensation, double c_prime) {
  return p * compensation + (1.0 - p) * c_prime;
}

// Principal branch W0 on [0, inf). Throws std::domain_error for x < 0.
double lambert_w0(double x);

// W0(exp(y)) evaluated without forming exp(y).
double lambert_w0_of_exp(double y);

enum class Clamp : std::int8_t { kNone = 0, kLower = 1, kUpper = 2 };

struct CompensationResult {
  double compensation = 0.0;
  double probability = 0.0;
  double weight = 0.0;  // expected cost of the offer at `compensation`
  Clamp clamp = Clamp::kNone;
};

// Which cost bounds the linear model's cap: the company cost (default) or
// the penalized cost.
enum class CapRule { kCompanyCost, kPenalizedCost };

// min{bound, (1 - alpha) / beta}: beyond the saturation point acceptance is
// certain and paying more only adds cost.
double linear_cap(double alpha, double beta, double company_cost,
                  double penalized_cost, CapRule rule = CapRule::kCompanyCost);

CompensationResult optimal_compensation_linear(
    double alpha, double beta, double c_prime, double cap,
    double floor = kDefaultCompensationFloor);

CompensationResult optimal_compensation_logistic(
    double gamma, double delta, double c_prime, double cap,
    double floor = kDefaultCompensationFloor);

struct GenericSearch {
  std::size_t grid_points = 1001;
  double relative_tolerance = 1e-9;  // golden-section width, relative to cap
  double floor = kDefaultCompensationFloor;
};

// Grid search plus golden-section refinement of the best grid cell. Never
// worse than the grid minimum; not guaranteed global for multimodal curves.
CompensationResult optimal_compensation_generic(
    const std::function<double(double)>& probability, double c_prime,
    double cap, const GenericSearch& search = {});

// Dispatches on the pair's model.
CompensationResult optimal_compensation(
    const PairParams& pair, double c_prime,
    double floor = kDefaultCompensationFloor);

// Vectorized linear closed form over parallel arrays. Results are identical
// to calling optimal_compensation_linear element by element.
struct LinearBatch {
  std::span<const double> alpha;
  std::span<const double> beta;
  std::span<const double> c_prime;
  std::span<const double> cap;
  std::span<double> compensation;
  std::span<double> probability;
  std::span<double> weight;
  std::span<Clamp> clamp;
};

void optimal_compensation_linear_batch(const LinearBatch& batch,
                                       double floor = kDefaultCompensationFloor);

}  // namespace crowdcomp
