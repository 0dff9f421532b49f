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

// Dense bounded-variable primal simplex.
//
//   minimize    c^T x
//   subject to  row_r(x) {<=, =, >=} rhs_r
//               lower <= x <= upper
//
// Two phases with one artificial per row. Entering column by Dantzig's rule;
// after a run of degenerate pivots the solver falls back to Bland's rule
// until it makes progress again, which rules out cycling. Outside Bland mode
// the ratio test is Harris's two-pass variant (bounds relaxed by the
// feasibility tolerance, largest pivot among blocking rows). Every column
// needs a finite lower or upper bound.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace crowdcomp::lp {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

struct Term {
  std::size_t column;
  double coefficient;
};

struct Row {
  std::vector<Term> terms;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
};

struct LinearProgram {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  std::size_t add_column(double c, double lo, double hi);
  std::size_t add_row(std::vector<Term> terms, RowSense sense, double rhs);

  std::size_t num_columns() const { return cost.size(); }
  std::size_t num_rows() const { return rows.size(); }

  double objective_value(std::span<const double> x) const;
  double row_activity(std::size_t r, std::span<const double> x) const;
  // Rows and bounds satisfied within `tolerance`.
  bool is_feasible(std::span<const double> x, double tolerance) const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> values;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  std::size_t degenerate_pivots_before_bland = 50;
  std::size_t max_iterations = 0;  // 0: scale with problem size
};

LpSolution simplex_solve(const LinearProgram& lp,
                         const SimplexOptions& options = {});

// Solves with column bounds replaced by `lower` / `upper`.
LpSolution simplex_solve(const LinearProgram& lp, std::span<const double> lower,
                         std::span<const double> upper,
                         const SimplexOptions& options = {});

}  // namespace crowdcomp::lp
