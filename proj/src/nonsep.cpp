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

#include "crowdcomp/nonsep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "crowdcomp/assignment.hpp"

namespace crowdcomp {

using lp::RowSense;
using lp::Term;

void validate_constraints(const std::vector<NonSepConstraint>& constraints,
                          const ProblemInstance& inst) {
  const std::size_t cells = inst.num_tasks() * inst.num_drivers();
  for (std::size_t l = 0; l < constraints.size(); ++l) {
    const NonSepConstraint& con = constraints[l];
    const std::string where = "constraint " + std::to_string(l);
    if (con.a.size() != cells || con.b.size() != cells) {
      throw InputError(where + ": a and b must be |I| x |J| tables");
    }
    if (!std::isfinite(con.limit)) throw InputError(where + ": B must be finite");
    bool nonzero = false;
    for (std::size_t k = 0; k < cells; ++k) {
      if (!std::isfinite(con.a[k]) || !std::isfinite(con.b[k])) {
        throw InputError(where + ": coefficients must be finite");
      }
      nonzero = nonzero || con.a[k] != 0.0 || con.b[k] != 0.0;
    }
    if (!nonzero) throw InputError(where + ": all coefficients are zero");
  }
}

ObjectiveSplit split_objective(const PairParams& pair, double c_prime) {
  ObjectiveSplit s;
  switch (pair.kind) {
    case ModelKind::kLinear: {
      const double alpha = pair.alpha;
      const double beta = pair.beta;
      s.f = [alpha, beta, c_prime](double c) {
        return beta * c * c + (alpha - beta * c_prime) * c;
      };
      s.g = c_prime * (1.0 - alpha);
      s.convex = true;
      break;
    }
    case ModelKind::kLogistic:
    case ModelKind::kGeneric: {
      s.f = [pair, c_prime](double c) {
        if (c == 0.0) return 0.0;
        return acceptance_probability(pair, c) * (c - c_prime);
      };
      s.g = c_prime;
      s.convex = false;
      break;
    }
  }
  return s;
}

PiecewiseGrid build_grid(const ProblemInstance& inst, std::size_t breakpoints,
                         double floor) {
  if (breakpoints < 2) throw InputError("breakpoints must be >= 2");
  PiecewiseGrid grid;
  grid.tasks = inst.num_tasks();
  grid.drivers = inst.num_drivers();
  grid.pairs.resize(grid.tasks * grid.drivers);
  const std::size_t K = breakpoints;
  for (std::size_t i = 0; i < grid.tasks; ++i) {
    for (std::size_t j = 0; j < grid.drivers; ++j) {
      const PairParams& pair = inst.pair(i, j);
      const ObjectiveSplit split =
          split_objective(pair, inst.tasks[i].penalized_cost);
      PairGrid& pg = grid.pairs[i * grid.drivers + j];
      pg.g = split.g;
      pg.convex = split.convex;
      pg.offer_allowed = pair.cap > 0.0 && pair.cap >= floor;
      // Unusable pairs still get a valid grid; their x column is fixed at 0.
      const double top = pg.offer_allowed ? pair.cap : 1.0;
      pg.u.resize(K);
      if (!pg.convex && K >= 3 && floor > 0.0 && top > 2.0 * floor) {
        pg.u[0] = 0.0;
        for (std::size_t m = 0; m + 1 < K; ++m) {
          pg.u[m + 1] = floor + static_cast<double>(m) * (top - floor) /
                                    static_cast<double>(K - 2);
        }
      } else {
        for (std::size_t k = 0; k < K; ++k) {
          pg.u[k] = static_cast<double>(k) * top / static_cast<double>(K - 1);
        }
      }
      pg.u[K - 1] = top;
      pg.f.resize(K);
      for (std::size_t k = 0; k < K; ++k) pg.f[k] = split.f(pg.u[k]);
      pg.f[0] = 0.0;
    }
  }
  return grid;
}

NonSepMilp build_milp(const ProblemInstance& inst,
                      const std::vector<NonSepConstraint>& constraints,
                      const NonSepOptions& options) {
  validate_constraints(constraints, inst);
  NonSepMilp out;
  out.grid = build_grid(inst, options.breakpoints, options.floor);
  const std::size_t n = inst.num_tasks();
  const std::size_t m = inst.num_drivers();
  const std::size_t K = options.breakpoints;
  lp::MipProblem& mip = out.mip;
  MilpLayout& lay = out.layout;
  lay.tasks = n;
  lay.drivers = m;
  lay.y.resize(n);
  lay.x.resize(n * m);
  lay.w_begin.resize(n * m);
  lay.w_count.assign(n * m, K);
  lay.v_begin.assign(n * m, MilpLayout::kAbsent);
  lay.v_count.assign(n * m, 0);

  for (std::size_t i = 0; i < n; ++i) lay.y[i] = mip.add_binary(inst.tasks[i].cost);
  for (std::size_t k = 0; k < n * m; ++k) {
    const PairGrid& pg = out.grid.pairs[k];
    lay.x[k] = mip.add_binary(pg.g);
    if (!pg.offer_allowed) mip.lp.upper[lay.x[k]] = 0.0;
    lay.w_begin[k] = mip.lp.num_columns();
    for (std::size_t b = 0; b < K; ++b) mip.lp.add_column(pg.f[b], 0.0, 1.0);
    if (!pg.convex || options.keep_convex_binaries) {
      lay.v_begin[k] = mip.lp.num_columns();
      lay.v_count[k] = K - 1;
      for (std::size_t b = 0; b + 1 < K; ++b) mip.add_binary(0.0);
    }
  }
  mip.binary.resize(mip.lp.num_columns(), 0);

  for (std::size_t j = 0; j < m; ++j) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < n; ++i) terms.push_back({lay.x[i * m + j], 1.0});
    mip.lp.add_row(std::move(terms), RowSense::kLessEqual, 1.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Term> terms{{lay.y[i], 1.0}};
    for (std::size_t j = 0; j < m; ++j) terms.push_back({lay.x[i * m + j], 1.0});
    mip.lp.add_row(std::move(terms), RowSense::kEqual, 1.0);
  }
  for (const NonSepConstraint& con : constraints) {
    std::vector<Term> terms;
    for (std::size_t k = 0; k < n * m; ++k) {
      if (con.a[k] != 0.0) terms.push_back({lay.x[k], con.a[k]});
      if (con.b[k] == 0.0) continue;
      const PairGrid& pg = out.grid.pairs[k];
      for (std::size_t b = 1; b < K; ++b) {
        terms.push_back({lay.w_begin[k] + b, con.b[k] * pg.u[b]});
      }
    }
    mip.lp.add_row(std::move(terms), RowSense::kLessEqual, con.limit);
  }
  for (std::size_t k = 0; k < n * m; ++k) {
    const PairGrid& pg = out.grid.pairs[k];
    const std::size_t w0 = lay.w_begin[k];
    // sum_{b>=1} w^b <= x. Implies C <= U x and keeps coefficients at one,
    // which matters when u^1 is the tiny floor breakpoint.
    std::vector<Term> link{{lay.x[k], -1.0}};
    for (std::size_t b = 1; b < K; ++b) link.push_back({w0 + b, 1.0});
    mip.lp.add_row(std::move(link), RowSense::kLessEqual, 0.0);
    if (pg.offer_allowed && options.floor > 0.0) {
      if (pg.u[1] == options.floor) {
        // The floor is a breakpoint: an offer may not rest on u^1 = 0.
        mip.lp.add_row({{lay.x[k], 1.0}, {w0, 1.0}}, RowSense::kLessEqual, 1.0);
      } else {
        // floor * x <= C, scaled by 1 / u^1 to keep coefficients near one.
        const double scale = 1.0 / pg.u[1];
        std::vector<Term> floor_row{{lay.x[k], options.floor * scale}};
        for (std::size_t b = 1; b < K; ++b) {
          floor_row.push_back({w0 + b, -pg.u[b] * scale});
        }
        mip.lp.add_row(std::move(floor_row), RowSense::kLessEqual, 0.0);
      }
    }
    std::vector<Term> convexity;
    for (std::size_t b = 0; b < K; ++b) convexity.push_back({w0 + b, 1.0});
    mip.lp.add_row(std::move(convexity), RowSense::kEqual, 1.0);

    if (lay.v_begin[k] == MilpLayout::kAbsent) continue;
    const std::size_t v0 = lay.v_begin[k];
    for (std::size_t b = 0; b < K; ++b) {
      std::vector<Term> adj{{w0 + b, 1.0}};
      if (b > 0) adj.push_back({v0 + b - 1, -1.0});
      if (b + 1 < K) adj.push_back({v0 + b, -1.0});
      mip.lp.add_row(std::move(adj), RowSense::kLessEqual, 0.0);
    }
    std::vector<Term> one;
    for (std::size_t b = 0; b + 1 < K; ++b) one.push_back({v0 + b, 1.0});
    mip.lp.add_row(std::move(one), RowSense::kEqual, 1.0);
  }
  return out;
}

std::vector<double> encode_plan(const NonSepMilp& milp, const OfferPlan& plan) {
  const MilpLayout& lay = milp.layout;
  std::vector<double> x(milp.mip.lp.num_columns(), 0.0);
  const std::size_t m = lay.drivers;
  for (std::size_t i = 0; i < lay.tasks; ++i) {
    const Allocation& a =
        i < plan.allocations.size() ? plan.allocations[i] : Allocation{};
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t k = i * m + j;
      const PairGrid& pg = milp.grid.pairs[k];
      const std::size_t K = pg.u.size();
      std::size_t seg = 0;
      double t = 0.0;
      const bool offered = a.offered() && static_cast<std::size_t>(a.driver) == j;
      if (offered) {
        x[lay.x[k]] = 1.0;
        const double c = std::clamp(a.compensation, 0.0, pg.u[K - 1]);
        while (seg + 2 < K && c > pg.u[seg + 1]) ++seg;
        t = (c - pg.u[seg]) / (pg.u[seg + 1] - pg.u[seg]);
      }
      x[lay.w_begin[k] + seg] = 1.0 - t;
      x[lay.w_begin[k] + seg + 1] = t;
      if (lay.v_begin[k] != MilpLayout::kAbsent) x[lay.v_begin[k] + seg] = 1.0;
    }
    if (!a.offered()) x[lay.y[i]] = 1.0;
  }
  return x;
}

OfferPlan decode_plan(const NonSepMilp& milp, const ProblemInstance& inst,
                      const std::vector<double>& values, double floor) {
  const MilpLayout& lay = milp.layout;
  OfferPlan plan = all_company_plan(inst);
  const std::size_t m = lay.drivers;
  for (std::size_t i = 0; i < lay.tasks; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t k = i * m + j;
      if (values[lay.x[k]] <= 0.5) continue;
      const PairGrid& pg = milp.grid.pairs[k];
      double c = 0.0;
      for (std::size_t b = 0; b < pg.u.size(); ++b) {
        c += pg.u[b] * values[lay.w_begin[k] + b];
      }
      const double cap = inst.pair(i, j).cap;
      c = std::clamp(c, std::min(floor, cap), cap);
      plan.allocations[i] = Allocation::offer(static_cast<int>(j), c);
    }
  }
  return plan;
}

MilpResult solve_nonsep(const ProblemInstance& inst,
                        const std::vector<NonSepConstraint>& constraints,
                        const NonSepOptions& options) {
  const NonSepMilp milp = build_milp(inst, constraints, options);
  const double tol = options.search.simplex.feasibility_tolerance;

  std::optional<std::vector<double>> start;
  if (options.warm_start) {
    std::vector<double> two_phase =
        encode_plan(milp, solve_two_phase(inst, options.floor));
    if (milp.mip.lp.is_feasible(two_phase, tol)) start = std::move(two_phase);
  }
  if (!start) {
    std::vector<double> company = encode_plan(milp, all_company_plan(inst));
    if (milp.mip.lp.is_feasible(company, tol)) start = std::move(company);
  }

  const lp::MipSolution sol = lp::branch_and_bound(milp.mip, options.search, start);
  MilpResult out;
  out.status = sol.status;
  out.objective = sol.objective;
  out.bound = sol.bound;
  out.nodes_explored = sol.nodes;
  out.plan = sol.has_incumbent
                 ? decode_plan(milp, inst, sol.values, options.floor)
                 : all_company_plan(inst);
  evaluate_plan(out.plan, inst);
  out.audited_cost = *out.plan.expected_cost;
  return out;
}

}  // namespace crowdcomp
