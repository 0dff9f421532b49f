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

#include "crowdcomp/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "crowdcomp/golden.hpp"

namespace crowdcomp {

namespace {
constexpr double kMinMultiplier = 1e-9;
}  // namespace

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kIndividual:
      return "individual";
    case SchemeKind::kDetour:
      return "detour";
    case SchemeKind::kDistance:
      return "distance";
    case SchemeKind::kFlat:
      return "flat";
  }
  return "unknown";
}

SchemeKind parse_scheme_kind(std::string_view name) {
  for (SchemeKind k : kAllSchemes) {
    if (name == to_string(k)) return k;
  }
  throw InputError("unknown scheme '" + std::string(name) + "'");
}

double scheme_multiplier(SchemeKind kind, const ProblemInstance& inst, std::size_t i,
                         std::size_t j) {
  switch (kind) {
    case SchemeKind::kDetour:
      return inst.pair(i, j).detour;
    case SchemeKind::kDistance:
      return inst.task_distance(i);
    case SchemeKind::kFlat:
      return 1.0;
    case SchemeKind::kIndividual:
      break;
  }
  throw std::invalid_argument("individual scheme has no multiplier");
}

double scheme_compensation(const SchemeSpec& spec, const ProblemInstance& inst,
                           std::size_t i, std::size_t j) {
  return spec.p * scheme_multiplier(spec.kind, inst, i, j);
}

WeightMatrix scheme_weights(const SchemeSpec& spec, const ProblemInstance& inst,
                            double floor) {
  if (!(spec.p >= 0.0)) throw InputError("scheme parameter must be >= 0");
  const std::size_t n = inst.num_tasks();
  const std::size_t m = inst.num_drivers();
  std::vector<double> requested(n * m), clipped(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t k = i * m + j;
      const double cap = inst.pair(i, j).cap;
      const double raw = scheme_compensation(spec, inst, i, j);
      double c = std::clamp(raw, 0.0, cap);
      if (c > 0.0 && c < floor) c = std::min(floor, cap);
      requested[k] = raw;
      clipped[k] = c;
    }
  }
  WeightMatrix w = build_weights(inst, clipped, std::string(to_string(spec.kind)));
  w.requested = std::move(requested);
  return w;
}

double p_max(SchemeKind kind, const ProblemInstance& inst,
             const std::vector<double>& optimal_compensations) {
  const std::size_t m = inst.num_drivers();
  double best = -1.0;
  for (std::size_t i = 0; i < inst.num_tasks(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double mult = scheme_multiplier(kind, inst, i, j);
      if (!(mult >= kMinMultiplier)) continue;
      best = std::max(best, optimal_compensations[i * m + j] / mult);
    }
  }
  if (best < 0.0) throw InputError("scheme undefined for instance");
  return best;
}

TuneResult tune_scheme(SchemeKind kind, const ProblemInstance& inst,
                       const TuneOptions& options) {
  TuneResult out;
  out.kind = kind;
  if (kind == SchemeKind::kIndividual) {
    out.p = kNaN;
    out.p_max = kNaN;
    out.plan = solve_two_phase(inst, options.floor);
    out.objective = *out.plan.expected_cost;
    out.evaluations = 1;
    return out;
  }

  const WeightMatrix individual = individual_weights(inst, options.floor);
  const double pmax = p_max(kind, inst, individual.compensation);
  out.p_max = pmax;

  std::map<double, double> memo;
  const auto evaluate = [&](double p) {
    const auto it = memo.find(p);
    if (it != memo.end()) return it->second;
    const OfferPlan plan = solve_assignment(scheme_weights({kind, p}, inst, options.floor));
    memo.emplace(p, *plan.expected_cost);
    return *plan.expected_cost;
  };

  const int steps = std::max(options.grid_steps, 1);
  int best_l = 0;
  double best_value = 0.0;
  for (int l = 0; l <= steps; ++l) {
    const double p = l * pmax / steps;
    const double v = evaluate(p);
    out.grid.push_back({p, v});
    if (l == 0 || v < best_value) {
      best_value = v;
      best_l = l;
    }
  }
  double best_p = out.grid[static_cast<std::size_t>(best_l)].p;
  if (pmax > 0.0) {
    const double lo = std::max(best_l - 1, 0) * pmax / steps;
    const double hi = std::min(best_l + 1, steps) * pmax / steps;
    const GoldenResult gs = golden_section_minimize(
        evaluate, lo, hi, options.relative_tolerance * pmax, options.max_iterations);
    if (gs.value < best_value) {
      best_value = gs.value;
      best_p = gs.x;
    }
  }

  out.p = best_p;
  out.plan = solve_assignment(scheme_weights({kind, best_p}, inst, options.floor));
  evaluate_plan(out.plan, inst);
  out.objective = *out.plan.expected_cost;
  out.evaluations = memo.size();
  return out;
}

}  // namespace crowdcomp
