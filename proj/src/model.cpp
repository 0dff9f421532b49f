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

#include "crowdcomp/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crowdcomp/acceptance.hpp"

namespace crowdcomp {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLinear:
      return "linear";
    case ModelKind::kLogistic:
      return "logistic";
    case ModelKind::kGeneric:
      return "generic";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "linear") return ModelKind::kLinear;
  if (name == "logistic") return ModelKind::kLogistic;
  if (name == "generic") return ModelKind::kGeneric;
  throw InputError("unknown model kind '" + std::string(name) + "'");
}

double TabulatedCurve::operator()(double c) const {
  if (c <= 0.0 || compensation.empty()) return 0.0;
  if (c <= compensation.front()) {
    // Interpolate from the origin, P(0) = 0.
    const double c0 = compensation.front();
    return c0 > 0.0 ? probability.front() * (c / c0) : probability.front();
  }
  if (c >= compensation.back()) return probability.back();
  const auto hi = std::upper_bound(compensation.begin(), compensation.end(), c);
  const auto k = static_cast<std::size_t>(hi - compensation.begin());
  const double c_lo = compensation[k - 1];
  const double c_hi = compensation[k];
  const double t = (c - c_lo) / (c_hi - c_lo);
  return probability[k - 1] + t * (probability[k] - probability[k - 1]);
}

double ProblemInstance::task_distance(std::size_t i) const {
  return distance(store, tasks[i].dest);
}

double ProblemInstance::driver_distance(std::size_t j) const {
  return distance(store, drivers[j].dest);
}

std::size_t OfferPlan::num_offers() const {
  return static_cast<std::size_t>(
      std::count_if(allocations.begin(), allocations.end(),
                    [](const Allocation& a) { return a.offered(); }));
}

OfferPlan all_company_plan(const ProblemInstance& inst) {
  OfferPlan plan;
  plan.allocations.assign(inst.num_tasks(), Allocation::company());
  return plan;
}

std::vector<Violation> validate(const OfferPlan& plan,
                                const ProblemInstance& inst) {
  std::vector<Violation> out;
  if (plan.allocations.size() != inst.num_tasks()) {
    std::ostringstream msg;
    msg << "plan has " << plan.allocations.size() << " allocations for "
        << inst.num_tasks() << " tasks";
    out.push_back({Violation::Kind::kShape, -1, -1, msg.str()});
    return out;
  }
  const auto num_drivers = static_cast<int>(inst.num_drivers());
  std::vector<int> first_task(inst.num_drivers(), -1);
  for (std::size_t i = 0; i < plan.allocations.size(); ++i) {
    const Allocation& a = plan.allocations[i];
    if (!a.offered()) continue;
    const int task = static_cast<int>(i);
    if (a.driver >= num_drivers) {
      std::ostringstream msg;
      msg << "task " << task << " offered to unknown driver " << a.driver;
      out.push_back({Violation::Kind::kUnknownDriver, task, a.driver, msg.str()});
      continue;
    }
    int& first = first_task[static_cast<std::size_t>(a.driver)];
    if (first >= 0) {
      std::ostringstream msg;
      msg << "driver " << a.driver << " offered more than one task (tasks "
          << first << " and " << task << ")";
      out.push_back({Violation::Kind::kDriverReused, task, a.driver, msg.str()});
    } else {
      first = task;
    }
    const PairParams& pair = inst.pair(i, static_cast<std::size_t>(a.driver));
    if (!(a.compensation > 0.0)) {
      std::ostringstream msg;
      msg << "offer of task " << task << " to driver " << a.driver
          << " has non-positive compensation " << a.compensation;
      out.push_back(
          {Violation::Kind::kNonPositiveCompensation, task, a.driver, msg.str()});
    } else if (a.compensation > pair.cap + kCapTolerance) {
      std::ostringstream msg;
      msg << "compensation " << a.compensation << " for task " << task
          << " / driver " << a.driver << " exceeds cap " << pair.cap;
      out.push_back({Violation::Kind::kCapExceeded, task, a.driver, msg.str()});
    }
  }
  return out;
}

namespace {

std::string describe(const std::vector<Violation>& violations) {
  std::string out = "invalid plan: ";
  for (std::size_t k = 0; k < violations.size(); ++k) {
    if (k) out += "; ";
    out += violations[k].message;
  }
  return out;
}

void require_valid(const OfferPlan& plan, const ProblemInstance& inst) {
  auto violations = validate(plan, inst);
  if (!violations.empty()) throw PlanValidationError(std::move(violations));
}

}  // namespace

PlanValidationError::PlanValidationError(std::vector<Violation> violations)
    : InputError(describe(violations)), violations_(std::move(violations)) {}

double expected_cost(const OfferPlan& plan, const ProblemInstance& inst) {
  require_valid(plan, inst);
  double total = 0.0;
  for (std::size_t i = 0; i < plan.allocations.size(); ++i) {
    const Allocation& a = plan.allocations[i];
    const Task& task = inst.tasks[i];
    if (!a.offered()) {
      total += task.cost;
      continue;
    }
    const PairParams& pair = inst.pair(i, static_cast<std::size_t>(a.driver));
    const double p = acceptance_probability(pair, a.compensation);
    total += offer_weight(p, a.compensation, task.penalized_cost);
  }
  return total;
}

double expected_distance(const OfferPlan& plan, const ProblemInstance& inst) {
  require_valid(plan, inst);
  double total = 0.0;
  for (std::size_t i = 0; i < plan.allocations.size(); ++i) {
    const Allocation& a = plan.allocations[i];
    const double round_trip = 2.0 * inst.task_distance(i);
    if (!a.offered()) {
      total += round_trip;
      continue;
    }
    const PairParams& pair = inst.pair(i, static_cast<std::size_t>(a.driver));
    const double p = acceptance_probability(pair, a.compensation);
    total += p * pair.detour + (1.0 - p) * round_trip;
  }
  return total;
}

std::vector<double> acceptance_probabilities(const OfferPlan& plan,
                                             const ProblemInstance& inst) {
  require_valid(plan, inst);
  std::vector<double> out(plan.allocations.size(), 0.0);
  for (std::size_t i = 0; i < plan.allocations.size(); ++i) {
    const Allocation& a = plan.allocations[i];
    if (a.offered()) {
      out[i] = acceptance_probability(
          inst.pair(i, static_cast<std::size_t>(a.driver)), a.compensation);
    }
  }
  return out;
}

void evaluate_plan(OfferPlan& plan, const ProblemInstance& inst) {
  plan.expected_cost = expected_cost(plan, inst);
  plan.expected_distance = expected_distance(plan, inst);
}

double baseline_cost(const ProblemInstance& inst) {
  double total = 0.0;
  for (const Task& t : inst.tasks) total += t.cost;
  return total;
}

double baseline_distance(const ProblemInstance& inst) {
  double total = 0.0;
  for (std::size_t i = 0; i < inst.num_tasks(); ++i) {
    total += 2.0 * inst.task_distance(i);
  }
  return total;
}

}  // namespace crowdcomp
