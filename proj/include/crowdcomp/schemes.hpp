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

// Benchmark compensation rules and their one-parameter tuning.
//
//   detour:   C = p * (d_i + d_ij - d_j)
//   distance: C = p * d_i
//   flat:     C = p
//
// Scheme values are clipped to [0, U_ij]. A positive value below the
// compensation floor is raised to the floor, so every scheme offer lies in
// the range the individual optimum is taken over.

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "crowdcomp/acceptance.hpp"
#include "crowdcomp/assignment.hpp"
#include "crowdcomp/model.hpp"

namespace crowdcomp {

enum class SchemeKind { kIndividual, kDetour, kDistance, kFlat };

inline constexpr SchemeKind kAllSchemes[] = {SchemeKind::kIndividual, SchemeKind::kDetour,
                                             SchemeKind::kDistance, SchemeKind::kFlat};

std::string_view to_string(SchemeKind kind);
SchemeKind parse_scheme_kind(std::string_view name);

struct SchemeSpec {
  SchemeKind kind = SchemeKind::kIndividual;
  double p = 0.0;
};

// Quantity p is multiplied by: the detour, d_i, or 1.
double scheme_multiplier(SchemeKind kind, const ProblemInstance& inst, std::size_t i,
                         std::size_t j);

// Raw p * multiplier, before clipping.
double scheme_compensation(const SchemeSpec& spec, const ProblemInstance& inst,
                           std::size_t i, std::size_t j);

// Clipped scheme compensations and their weights; `requested` keeps the raw
// values. Not defined for the individual scheme.
WeightMatrix scheme_weights(const SchemeSpec& spec, const ProblemInstance& inst,
                            double floor = kDefaultCompensationFloor);

// Largest p any optimal compensation maps to: max C*_ij / multiplier over
// pairs whose multiplier is at least 1e-9. Throws InputError when no pair
// qualifies.
double p_max(SchemeKind kind, const ProblemInstance& inst,
             const std::vector<double>& optimal_compensations);

struct TuneOptions {
  int grid_steps = 25;
  double relative_tolerance = 1e-6;  // golden-section width relative to p_max
  int max_iterations = 100;
  double floor = kDefaultCompensationFloor;
};

struct GridPoint {
  double p;
  double objective;
};

struct TuneResult {
  SchemeKind kind = SchemeKind::kIndividual;
  double p = 0.0;  // NaN for the individual scheme
  double p_max = 0.0;
  double objective = 0.0;
  OfferPlan plan;  // evaluated
  std::vector<GridPoint> grid;
  std::size_t evaluations = 0;  // distinct assignment solves
};

// Grid over p = l * p_max / steps, smallest l among ties, then golden
// section on the neighbouring cells. The result is a local minimum at best.
// The individual scheme just runs the two-phase solver.
TuneResult tune_scheme(SchemeKind kind, const ProblemInstance& inst,
                       const TuneOptions& options = {});

}  // namespace crowdcomp
