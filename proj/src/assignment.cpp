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

#include "crowdcomp/assignment.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "crowdcomp/kernels.hpp"

namespace crowdcomp {
namespace {

[[noreturn]] void pair_error(std::size_t i, std::size_t j,
                             const std::string& what) {
  std::ostringstream msg;
  msg << "pair (" << i << ", " << j << "): " << what;
  throw InputError(msg.str());
}

}  // namespace

WeightMatrix build_weights(const ProblemInstance& inst,
                           const std::vector<double>& compensations,
                           std::string provenance) {
  const std::size_t n = inst.num_tasks();
  const std::size_t m = inst.num_drivers();
  if (compensations.size() != n * m) {
    throw InputError("compensation table has wrong size");
  }
  WeightMatrix w;
  w.tasks = n;
  w.drivers = m;
  w.weight.resize(n * m);
  w.compensation = compensations;
  w.probability.resize(n * m);
  w.company.resize(n);
  w.provenance = std::move(provenance);
  for (std::size_t i = 0; i < n; ++i) {
    const Task& task = inst.tasks[i];
    w.company[i] = task.cost;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t k = i * m + j;
      const double c = compensations[k];
      const PairParams& pair = inst.pair(i, j);
      if (!(c >= 0.0)) pair_error(i, j, "negative compensation");
      if (c > pair.cap + kCapTolerance) {
        std::ostringstream what;
        what << "compensation " << c << " exceeds cap " << pair.cap;
        pair_error(i, j, what.str());
      }
      const double p = acceptance_probability(pair, c);
      const double weight = offer_weight(p, c, task.penalized_cost);
      if (!(weight >= 0.0) || !std::isfinite(weight)) {
        pair_error(i, j, "weight is negative or not finite");
      }
      w.probability[k] = p;
      w.weight[k] = weight;
    }
  }
  return w;
}

WeightMatrix individual_weights(const ProblemInstance& inst, double floor) {
  const std::size_t n = inst.num_tasks();
  const std::size_t m = inst.num_drivers();
  WeightMatrix w;
  w.tasks = n;
  w.drivers = m;
  w.weight.resize(n * m);
  w.compensation.resize(n * m);
  w.probability.resize(n * m);
  w.company.resize(n);
  w.provenance = "individual";
  for (std::size_t i = 0; i < n; ++i) w.company[i] = inst.tasks[i].cost;

  if (inst.model == ModelKind::kLinear) {
    std::vector<double> alpha(n * m), beta(n * m), c_prime(n * m), cap(n * m);
    std::vector<Clamp> clamp(n * m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t k = i * m + j;
        const PairParams& pair = inst.pair(i, j);
        alpha[k] = pair.alpha;
        beta[k] = pair.beta;
        c_prime[k] = inst.tasks[i].penalized_cost;
        cap[k] = pair.cap;
      }
    }
    optimal_compensation_linear_batch({alpha, beta, c_prime, cap,
                                       w.compensation, w.probability, w.weight,
                                       clamp},
                                      floor);
    return w;
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t k = i * m + j;
      const auto r = optimal_compensation(inst.pair(i, j),
                                          inst.tasks[i].penalized_cost, floor);
      w.compensation[k] = r.compensation;
      w.probability[k] = r.probability;
      w.weight[k] = r.weight;
    }
  }
  return w;
}

std::vector<int> min_cost_assignment(const std::vector<double>& cost,
                                     std::size_t rows, std::size_t cols) {
  if (rows > cols) throw std::invalid_argument("more rows than columns");
  if (cost.size() != rows * cols) {
    throw std::invalid_argument("cost matrix has wrong size");
  }
  const auto& kernels = kernels::active();
  const double inf = std::numeric_limits<double>::infinity();
  // Column `cols` is a virtual start column.
  const std::size_t root = cols;
  std::vector<double> u(rows, 0.0);
  std::vector<double> v(cols + 1, 0.0);
  std::vector<int> match(cols + 1, -1);  // row matched to each column
  std::vector<std::int32_t> way(cols + 1, 0);
  std::vector<double> min_slack(cols);
  std::vector<std::uint8_t> used(cols + 1);

  for (std::size_t row = 0; row < rows; ++row) {
    match[root] = static_cast<int>(row);
    std::size_t j0 = root;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const auto i0 = static_cast<std::size_t>(match[j0]);
      const kernels::AssignmentScanArgs scan{
          cost.data() + i0 * cols, u[i0],       v.data(),
          used.data(),             min_slack.data(), way.data(),
          static_cast<std::int32_t>(j0), cols};
      const kernels::ScanResult best = kernels.assignment_scan(scan);
      if (best.index == cols) {
        throw std::logic_error("assignment: no augmenting column");
      }
      const double delta = best.value;
      for (std::size_t j = 0; j < cols; ++j) {
        if (used[j]) {
          u[static_cast<std::size_t>(match[j])] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      u[static_cast<std::size_t>(match[root])] += delta;
      v[root] -= delta;
      j0 = best.index;
    } while (match[j0] != -1);
    do {
      const auto j1 = static_cast<std::size_t>(way[j0]);
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != root);
  }

  std::vector<int> column_of(rows, -1);
  for (std::size_t j = 0; j < cols; ++j) {
    if (match[j] >= 0) column_of[static_cast<std::size_t>(match[j])] = static_cast<int>(j);
  }
  return column_of;
}

OfferPlan solve_assignment(const WeightMatrix& weights) {
  const std::size_t n = weights.tasks;
  const std::size_t m = weights.drivers;
  OfferPlan plan;
  plan.allocations.assign(n, Allocation::company());
  if (n == 0) {
    plan.expected_cost = 0.0;
    return plan;
  }

  // Columns: drivers 0..m-1, then one company column per task. Off-diagonal
  // company entries get a cost no optimal matching can afford.
  double big = 1.0;
  for (double w : weights.weight) big += w;
  for (double c : weights.company) big += c;
  const std::size_t cols = m + n;
  std::vector<double> cost(n * cols, big);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      // A zero compensation is never accepted; such a pair is not an offer.
      if (weights.compensation[i * m + j] > 0.0) {
        cost[i * cols + j] = weights.at(i, j);
      }
    }
    cost[i * cols + m + i] = weights.company[i];
  }

  const std::vector<int> column = min_cost_assignment(cost, n, cols);
  double objective = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(column[i]);
    if (j < m) {
      plan.allocations[i] =
          Allocation::offer(static_cast<int>(j), weights.compensation[i * m + j]);
      objective += weights.at(i, j);
    } else {
      objective += weights.company[i];
    }
  }
  plan.expected_cost = objective;
  return plan;
}

double assignment_objective(const WeightMatrix& weights, const OfferPlan& plan) {
  double total = 0.0;
  for (std::size_t i = 0; i < plan.allocations.size(); ++i) {
    const Allocation& a = plan.allocations[i];
    total += a.offered() ? weights.at(i, static_cast<std::size_t>(a.driver))
                         : weights.company[i];
  }
  return total;
}

OfferPlan solve_two_phase(const ProblemInstance& inst, double floor) {
  OfferPlan plan = solve_assignment(individual_weights(inst, floor));
  evaluate_plan(plan, inst);
  return plan;
}

}  // namespace crowdcomp
