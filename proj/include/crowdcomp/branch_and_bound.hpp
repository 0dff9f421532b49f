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

// Best-first branch and bound over binary columns of a linear program. Each
// node re-solves the LP relaxation from scratch with tightened bounds. A
// relaxation within the integrality tolerance is re-solved with its binaries
// pinned to the rounded values before it becomes the incumbent.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "crowdcomp/simplex.hpp"

namespace crowdcomp::lp {

struct MipProblem {
  LinearProgram lp;
  std::vector<std::uint8_t> binary;  // per column; binary columns need [0,1]

  std::size_t add_binary(double cost);
};

enum class MipStatus { kOptimal, kNodeLimit, kInfeasible };

struct NodeEvent {
  std::size_t id = 0;
  std::size_t depth = 0;
  bool feasible = false;
  double lp_bound = 0.0;   // relaxation objective, when feasible
  double incumbent = 0.0;  // +inf while none is known
};

struct BranchAndBoundOptions {
  std::size_t node_limit = 100000;
  double integrality_tolerance = 1e-6;
  double prune_tolerance = 1e-9;
  SimplexOptions simplex;
  std::function<void(const NodeEvent&)> on_node;
};

struct MipSolution {
  MipStatus status = MipStatus::kInfeasible;
  bool has_incumbent = false;
  double objective = 0.0;
  double bound = 0.0;
  std::vector<double> values;
  std::size_t nodes = 0;
};

// Binary values more than the integrality tolerance away from 0 and 1.
bool is_integral(const MipProblem& mip, const std::vector<double>& x,
                 double tolerance);

// `start` is an optional feasible point used as the first incumbent; it is
// ignored when it violates a row, a bound, or integrality.
MipSolution branch_and_bound(const MipProblem& mip,
                             const BranchAndBoundOptions& options = {},
                             const std::optional<std::vector<double>>& start = {});

}  // namespace crowdcomp::lp
