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

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crowdcomp/error.hpp"

namespace crowdcomp {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

enum class ModelKind { kLinear, kLogistic, kGeneric };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

struct Task {
  int id = 0;
  Point dest;
  double cost = 0.0;            // company cost c_i
  double penalized_cost = 0.0;  // cost after a refused offer, >= cost
};

struct Driver {
  int id = 0;
  Point dest;
};

// Piecewise-linear acceptance curve through (compensation, probability)
// knots. Evaluates to 0 at compensation 0 regardless of the knots, and holds
// the last knot's probability beyond the final knot.
struct TabulatedCurve {
  std::vector<double> compensation;
  std::vector<double> probability;

  double operator()(double c) const;
  bool empty() const { return compensation.empty(); }
};

// Acceptance model parameters for one task/driver pair. Fields that the
// pair's model does not use hold NaN.
struct PairParams {
  int task = 0;
  int driver = 0;
  ModelKind kind = ModelKind::kLinear;
  double alpha = kNaN;  // linear base probability
  double beta = kNaN;   // linear rate, > 0
  double gamma = kNaN;  // logistic intercept
  double delta = kNaN;  // logistic slope, > 0
  double cap = 0.0;     // upper bound on the offered compensation
  double detour = 0.0;  // d_i + d_ij - d_j
  TabulatedCurve curve;  // generic model only
};

struct ProblemInstance {
  double plane_size = 200.0;
  Point store{100.0, 100.0};
  double rho = 0.0;
  double mu = 0.0;
  std::uint64_t seed = 0;
  ModelKind model = ModelKind::kLinear;
  std::vector<Task> tasks;
  std::vector<Driver> drivers;
  // Dense task-major table: pairs[i * drivers.size() + j].
  std::vector<PairParams> pairs;
  // Free-form numeric provenance (logistic fit coefficients and the like).
  std::map<std::string, double> calibration;

  std::size_t num_tasks() const { return tasks.size(); }
  std::size_t num_drivers() const { return drivers.size(); }

  const PairParams& pair(std::size_t i, std::size_t j) const {
    return pairs[i * drivers.size() + j];
  }
  PairParams& pair(std::size_t i, std::size_t j) {
    return pairs[i * drivers.size() + j];
  }

  // Store-to-destination distances.
  double task_distance(std::size_t i) const;
  double driver_distance(std::size_t j) const;
};

// Allocation of one task: the company fleet, or an offer to one driver.
struct Allocation {
  int driver = -1;
  double compensation = 0.0;

  bool offered() const { return driver >= 0; }

  static Allocation company() { return {}; }
  static Allocation offer(int driver, double compensation) {
    return {driver, compensation};
  }
};

struct OfferPlan {
  std::vector<Allocation> allocations;  // one per task
  std::optional<double> expected_cost;
  std::optional<double> expected_distance;

  std::size_t num_offers() const;
};

OfferPlan all_company_plan(const ProblemInstance& inst);

struct Violation {
  enum class Kind {
    kShape,                    // allocation count differs from task count
    kUnknownDriver,            // driver index out of range
    kDriverReused,             // driver offered more than one task
    kNonPositiveCompensation,  // offer without a positive compensation
    kCapExceeded,              // compensation above the pair's cap
  };
  Kind kind;
  int task = -1;
  int driver = -1;
  std::string message;
};

// Absolute slack allowed when checking compensation against its cap.
inline constexpr double kCapTolerance = 1e-9;

// Empty result means the plan is valid for the instance.
std::vector<Violation> validate(const OfferPlan& plan,
                                const ProblemInstance& inst);

class PlanValidationError : public InputError {
 public:
  explicit PlanValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Both throw PlanValidationError when validate() reports violations.
double expected_cost(const OfferPlan& plan, const ProblemInstance& inst);
double expected_distance(const OfferPlan& plan, const ProblemInstance& inst);

// Acceptance probability of each task's allocation (0 for company tasks).
std::vector<double> acceptance_probabilities(const OfferPlan& plan,
                                             const ProblemInstance& inst);

// Fills expected_cost and expected_distance from the instance.
void evaluate_plan(OfferPlan& plan, const ProblemInstance& inst);

// Cost and distance of the all-company plan, summed in task order so that
// the all-company plan reports exactly zero savings.
double baseline_cost(const ProblemInstance& inst);
double baseline_distance(const ProblemInstance& inst);

}  // namespace crowdcomp
