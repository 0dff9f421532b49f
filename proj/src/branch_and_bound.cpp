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

#include "crowdcomp/branch_and_bound.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "crowdcomp/error.hpp"

namespace crowdcomp::lp {

std::size_t MipProblem::add_binary(double cost) {
  const std::size_t col = lp.add_column(cost, 0.0, 1.0);
  binary.resize(lp.num_columns(), 0);
  binary[col] = 1;
  return col;
}

bool is_integral(const MipProblem& mip, const std::vector<double>& x,
                 double tolerance) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j < mip.binary.size() && mip.binary[j] &&
        std::abs(x[j] - std::round(x[j])) > tolerance) {
      return false;
    }
  }
  return true;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
  std::size_t id;
  std::size_t depth;
  double bound;  // parent's relaxation value
  std::vector<double> lower;
  std::vector<double> upper;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

MipSolution branch_and_bound(const MipProblem& mip,
                             const BranchAndBoundOptions& options,
                             const std::optional<std::vector<double>>& start) {
  const LinearProgram& lp = mip.lp;
  const std::size_t n = lp.num_columns();
  std::vector<std::uint8_t> binary = mip.binary;
  binary.resize(n, 0);

  MipSolution out;
  double incumbent = kInf;
  if (start && start->size() == n &&
      lp.is_feasible(*start, options.simplex.feasibility_tolerance) &&
      is_integral(mip, *start, options.integrality_tolerance)) {
    incumbent = lp.objective_value(*start);
    out.values = *start;
    out.has_incumbent = true;
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::size_t next_id = 0;
  open.push({next_id++, 0, -kInf, lp.lower, lp.upper});

  while (!open.empty()) {
    if (open.top().bound >= incumbent - options.prune_tolerance) {
      // Everything left is dominated by the incumbent.
      while (!open.empty()) open.pop();
      break;
    }
    if (out.nodes >= options.node_limit) break;
    Node node = open.top();
    open.pop();
    ++out.nodes;

    const LpSolution rel =
        simplex_solve(lp, node.lower, node.upper, options.simplex);
    if (rel.status == LpStatus::kIterationLimit) {
      throw SolverError("simplex iteration limit reached at node " +
                        std::to_string(node.id));
    }
    if (rel.status == LpStatus::kUnbounded) {
      throw SolverError("LP relaxation unbounded");
    }
    const bool feasible = rel.status == LpStatus::kOptimal;
    if (options.on_node) {
      options.on_node({node.id, node.depth, feasible,
                       feasible ? rel.objective : 0.0, incumbent});
    }
    if (!feasible) continue;
    if (rel.objective >= incumbent - options.prune_tolerance) continue;

    std::size_t branch = n;
    std::size_t any_frac = n;
    double best_frac = options.integrality_tolerance;
    double worst_frac = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!binary[j]) continue;
      const double frac = std::abs(rel.values[j] - std::round(rel.values[j]));
      if (frac > best_frac) {
        best_frac = frac;
        branch = j;
      }
      if (frac > worst_frac) {
        worst_frac = frac;
        any_frac = j;
      }
    }
    if (branch == n) {
      // Near-integral: pin the binaries to their rounded values and re-solve,
      // so the incumbent satisfies every row with the rounded binaries.
      LpSolution fixed = rel;
      if (any_frac != n) {
        std::vector<double> lo = node.lower;
        std::vector<double> hi = node.upper;
        for (std::size_t j = 0; j < n; ++j) {
          if (binary[j]) lo[j] = hi[j] = std::round(rel.values[j]);
        }
        fixed = simplex_solve(lp, lo, hi, options.simplex);
      }
      if (fixed.status == LpStatus::kOptimal) {
        if (fixed.objective < incumbent) {
          incumbent = fixed.objective;
          out.values = std::move(fixed.values);
          for (std::size_t j = 0; j < n; ++j) {
            if (binary[j]) out.values[j] = std::round(out.values[j]);
          }
          out.has_incumbent = true;
        }
        continue;
      }
      branch = any_frac;
    }

    Node down{next_id++, node.depth + 1, rel.objective, node.lower, node.upper};
    down.upper[branch] = std::floor(rel.values[branch]);
    Node up{next_id++, node.depth + 1, rel.objective, std::move(node.lower),
            std::move(node.upper)};
    up.lower[branch] = std::ceil(rel.values[branch]);
    open.push(std::move(down));
    open.push(std::move(up));
  }

  if (!open.empty()) {
    out.status = MipStatus::kNodeLimit;
    double bound = incumbent;
    while (!open.empty()) {
      bound = std::min(bound, open.top().bound);
      open.pop();
    }
    out.bound = bound;
    out.objective = out.has_incumbent ? incumbent : kInf;
    return out;
  }
  if (!out.has_incumbent) {
    out.status = MipStatus::kInfeasible;
    out.objective = kInf;
    out.bound = kInf;
    return out;
  }
  out.status = MipStatus::kOptimal;
  out.objective = incumbent;
  out.bound = incumbent;
  return out;
}

}  // namespace crowdcomp::lp
