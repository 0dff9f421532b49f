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

// crowdcomp: generate instances, solve them, tune benchmark schemes, run
// sweeps and summarize results.
//
// Exit codes: 0 success, 1 invalid input or flags, 2 solver failure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "crowdcomp/acceptance.hpp"
#include "crowdcomp/assignment.hpp"
#include "crowdcomp/experiments.hpp"
#include "crowdcomp/gen.hpp"
#include "crowdcomp/io.hpp"
#include "crowdcomp/nonsep.hpp"
#include "crowdcomp/schemes.hpp"
#include "crowdcomp/stats.hpp"

namespace {

using namespace crowdcomp;
using Json = nlohmann::ordered_json;

constexpr int kExitInput = 1;
constexpr int kExitSolver = 2;

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_file(output, text);
  }
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string_view status_name(lp::MipStatus s) {
  switch (s) {
    case lp::MipStatus::kOptimal:
      return "optimal";
    case lp::MipStatus::kNodeLimit:
      return "node_limit";
    case lp::MipStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

template <typename T>
std::vector<T> parse_list(const std::vector<std::string>& items,
                          T (*parse)(std::string_view)) {
  std::vector<T> out;
  for (const auto& s : items) out.push_back(parse(s));
  return out;
}

struct GenArgs {
  std::size_t tasks = 100;
  std::size_t drivers = 100;
  double rho = 0.0;
  double mu = 0.5;
  std::uint64_t seed = 1;
  std::string model = "linear";
  std::string cap_rule = "company";
  std::size_t dataset_rows = 100000;
  std::string output;
  std::string dataset;
};

int run_gen(const GenArgs& a) {
  GenConfig cfg;
  cfg.tasks = a.tasks;
  cfg.drivers = a.drivers;
  cfg.rho = a.rho;
  cfg.mu = a.mu;
  cfg.seed = a.seed;
  cfg.model = parse_model_kind(a.model);
  cfg.dataset_rows = a.dataset_rows;
  if (a.cap_rule == "penalized") {
    cfg.cap_rule = CapRule::kPenalizedCost;
  } else if (a.cap_rule != "company") {
    throw InputError("unknown cap rule '" + a.cap_rule + "'");
  }
  validate(cfg);
  std::optional<LogisticFit> fit;
  if (!a.dataset.empty() || cfg.model == ModelKind::kLogistic) {
    const DecisionDataset data = simulate_decisions(cfg, cfg.dataset_rows);
    if (!a.dataset.empty()) write_file(a.dataset, dataset_to_csv(data));
    if (cfg.model == ModelKind::kLogistic) fit = fit_logistic(data);
  }
  ProblemInstance inst = generate(cfg, fit ? &*fit : nullptr);
  if (fit) inst.calibration["dataset_rows"] = static_cast<double>(cfg.dataset_rows);
  emit(instance_to_json(inst), a.output);
  return 0;
}

struct SolveArgs {
  std::string instance;
  std::string scheme = "individual";
  std::optional<double> p;
  double floor = kDefaultCompensationFloor;
  std::string output;
};

int run_solve(const SolveArgs& a) {
  const ProblemInstance inst = load_instance(a.instance);
  const SchemeKind kind = parse_scheme_kind(a.scheme);
  OfferPlan plan;
  if (kind == SchemeKind::kIndividual) {
    if (a.p) throw InputError("--p does not apply to the individual scheme");
    plan = solve_two_phase(inst, a.floor);
  } else if (a.p) {
    plan = solve_assignment(scheme_weights({kind, *a.p}, inst, a.floor));
    evaluate_plan(plan, inst);
  } else {
    TuneOptions opt;
    opt.floor = a.floor;
    plan = tune_scheme(kind, inst, opt).plan;
  }
  emit(plan_to_json(plan), a.output);
  return 0;
}

struct NonSepArgs {
  std::string instance;
  std::string constraints;
  std::size_t breakpoints = 11;
  double floor = kDefaultCompensationFloor;
  std::size_t node_limit = 100000;
  bool keep_binaries = false;
  bool no_warm_start = false;
  std::string output;
};

int run_nonsep(const NonSepArgs& a) {
  const ProblemInstance inst = load_instance(a.instance);
  std::vector<NonSepConstraint> constraints;
  if (!a.constraints.empty()) constraints = load_constraints(a.constraints, inst);
  NonSepOptions opt;
  opt.breakpoints = a.breakpoints;
  opt.floor = a.floor;
  opt.keep_convex_binaries = a.keep_binaries;
  opt.warm_start = !a.no_warm_start;
  opt.search.node_limit = a.node_limit;
  const MilpResult r = solve_nonsep(inst, constraints, opt);
  Json doc;
  doc["status"] = std::string(status_name(r.status));
  doc["objective"] = number_or_null(r.objective);
  doc["bound"] = number_or_null(r.bound);
  doc["audited_cost"] = r.audited_cost;
  doc["nodes_explored"] = r.nodes_explored;
  doc["breakpoints"] = a.breakpoints;
  doc["plan"] = Json::parse(plan_to_json(r.plan));
  emit(doc.dump(1) + "\n", a.output);
  if (r.status == lp::MipStatus::kInfeasible) {
    std::cerr << "error: the constrained model is infeasible\n";
    return kExitSolver;
  }
  return 0;
}

struct TuneArgs {
  std::string instance;
  std::string scheme;
  double floor = kDefaultCompensationFloor;
  std::string output;
};

int run_tune(const TuneArgs& a) {
  const ProblemInstance inst = load_instance(a.instance);
  TuneOptions opt;
  opt.floor = a.floor;
  const TuneResult r = tune_scheme(parse_scheme_kind(a.scheme), inst, opt);
  Json doc;
  doc["scheme"] = a.scheme;
  doc["p"] = number_or_null(r.p);
  doc["p_max"] = number_or_null(r.p_max);
  doc["objective"] = r.objective;
  doc["evaluations"] = r.evaluations;
  Json grid = Json::array();
  for (const auto& g : r.grid) grid.push_back({{"p", g.p}, {"objective", g.objective}});
  doc["grid"] = std::move(grid);
  doc["plan"] = Json::parse(plan_to_json(r.plan));
  emit(doc.dump(1) + "\n", a.output);
  return 0;
}

struct SweepArgs {
  std::vector<std::string> models{"linear"};
  std::vector<std::size_t> drivers{50};
  std::vector<double> rhos{0.0};
  std::vector<double> mus{0.5};
  std::vector<std::uint64_t> seeds{1};
  std::size_t tasks = 100;
  std::vector<std::string> schemes{"individual", "detour", "distance", "flat"};
  std::size_t dataset_rows = 100000;
  unsigned jobs = 1;
  bool timing = false;
  double floor = kDefaultCompensationFloor;
  std::string output;
};

int run_sweep(const SweepArgs& a) {
  SweepConfig cfg;
  cfg.models = parse_list<ModelKind>(a.models, parse_model_kind);
  cfg.drivers = a.drivers;
  cfg.rhos = a.rhos;
  cfg.mus = a.mus;
  cfg.seeds = a.seeds;
  cfg.tasks = a.tasks;
  cfg.schemes = parse_list<SchemeKind>(a.schemes, parse_scheme_kind);
  cfg.dataset_rows = a.dataset_rows;
  cfg.jobs = a.jobs;
  cfg.timing = a.timing;
  cfg.tune.floor = a.floor;
  const std::filesystem::path path = a.output;
  sweep(cfg, &path);
  return 0;
}

struct StatsArgs {
  std::string results;
  std::string metric = "cost_saving_pct";
  std::vector<std::string> compare;
  std::string trend;
  std::string scheme;
  std::string model;
};

int run_stats(const StatsArgs& a) {
  std::vector<ExperimentRecord> records = records_from_csv(read_file(a.results));
  const auto keep = [&](const ExperimentRecord& r) {
    if (!a.model.empty() && r.model != parse_model_kind(a.model)) return false;
    return true;
  };
  std::erase_if(records, [&](const ExperimentRecord& r) { return !keep(r); });
  Json doc;
  doc["metric"] = a.metric;
  if (!a.compare.empty()) {
    if (a.compare.size() != 2) throw InputError("--compare takes exactly two schemes");
    const SchemeKind sa = parse_scheme_kind(a.compare[0]);
    const SchemeKind sb = parse_scheme_kind(a.compare[1]);
    std::vector<ExperimentRecord> ra, rb;
    for (const auto& r : records) {
      if (r.scheme == sa) ra.push_back(r);
      if (r.scheme == sb) rb.push_back(r);
    }
    const PairedT t = paired_t(ra, rb, a.metric);
    doc["paired_t"] = {{"a", a.compare[0]},
                       {"b", a.compare[1]},
                       {"n", t.n},
                       {"mean_diff", t.mean_diff},
                       {"sd_diff", t.sd_diff},
                       {"t_stat", number_or_null(t.t_stat)},
                       {"p_value", t.p_value},
                       {"degenerate", t.degenerate}};
  }
  if (!a.trend.empty()) {
    std::vector<ExperimentRecord> subset;
    for (const auto& r : records) {
      if (a.scheme.empty() || r.scheme == parse_scheme_kind(a.scheme)) subset.push_back(r);
    }
    Json levels = Json::array();
    for (const auto& l : trend_report(subset, parse_trend_axis(a.trend), a.metric)) {
      levels.push_back({{"level", l.level}, {"mean", l.mean}, {"count", l.count}});
    }
    doc["trend"] = {{"axis", a.trend}, {"levels", std::move(levels)}};
  }
  if (a.compare.empty() && a.trend.empty()) {
    Json per_scheme = Json::object();
    for (SchemeKind s : kAllSchemes) {
      double sum = 0.0;
      std::size_t n = 0;
      for (const auto& r : records) {
        if (r.scheme != s) continue;
        if (const auto v = metric_value(r, a.metric)) {
          sum += *v;
          ++n;
        }
      }
      if (n) per_scheme[std::string(to_string(s))] = {{"mean", sum / n}, {"count", n}};
    }
    doc["by_scheme"] = std::move(per_scheme);
  }
  std::cout << doc.dump(1) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compensation and assignment for crowdsourced delivery"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "crowdcomp 0.1.0");

  const auto add_floor = [](CLI::App* cmd, double& floor) {
    cmd->add_option("--epsilon-floor", floor, "Smallest compensation an offer may carry")
        ->envname("CROWDCOMP_EPSILON_FLOOR")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
  };

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a synthetic instance");
  gen_cmd->add_option("--tasks", gen.tasks, "Number of tasks")->capture_default_str();
  gen_cmd->add_option("--drivers", gen.drivers, "Number of occasional drivers (O)")
      ->capture_default_str();
  gen_cmd->add_option("--rho", gen.rho, "Penalty factor, c' = (1 + rho) c")->capture_default_str();
  gen_cmd->add_option("--mu", gen.mu, "Distance-utility weight in [0, 1]")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")
      ->envname("CROWDCOMP_SEED")
      ->capture_default_str();
  gen_cmd->add_option("--model", gen.model, "Acceptance model")
      ->check(CLI::IsMember({"linear", "logistic"}))
      ->capture_default_str();
  gen_cmd->add_option("--cap-rule", gen.cap_rule, "Linear cap bound: company or penalized cost")
      ->check(CLI::IsMember({"company", "penalized"}))
      ->capture_default_str();
  gen_cmd->add_option("--dataset-rows", gen.dataset_rows,
                      "Simulated decisions for the logistic fit")
      ->capture_default_str();
  gen_cmd->add_option("--dataset", gen.dataset, "Also write the decision dataset CSV here");
  gen_cmd->add_option("-o,--output", gen.output, "Instance JSON (default: stdout)");

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve an instance with one scheme");
  solve_cmd->add_option("instance", solve.instance, "Instance JSON")->required();
  solve_cmd->add_option("--scheme", solve.scheme, "individual, detour, distance or flat")
      ->capture_default_str();
  solve_cmd->add_option("--p", solve.p, "Fixed scheme parameter (skips tuning)");
  add_floor(solve_cmd, solve.floor);
  solve_cmd->add_option("-o,--output", solve.output, "Plan JSON (default: stdout)");

  NonSepArgs nonsep;
  CLI::App* nonsep_cmd =
      app.add_subcommand("nonsep", "Solve with budget/cardinality side constraints");
  nonsep_cmd->add_option("instance", nonsep.instance, "Instance JSON")->required();
  nonsep_cmd->add_option("--constraints", nonsep.constraints,
                         "Constraints JSON: [{a: [[...]], b: [[...]], B: number}]");
  nonsep_cmd->add_option("--breakpoints", nonsep.breakpoints,
                         "Breakpoints K of the piecewise-linear objective (>= 2)")
      ->envname("CROWDCOMP_BREAKPOINTS")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}))
      ->capture_default_str();
  add_floor(nonsep_cmd, nonsep.floor);
  nonsep_cmd->add_option("--node-limit", nonsep.node_limit, "Branch-and-bound node limit")
      ->capture_default_str();
  nonsep_cmd->add_flag("--keep-convex-binaries", nonsep.keep_binaries,
                       "Keep adjacency binaries for convex (linear) pairs");
  nonsep_cmd->add_flag("--no-warm-start", nonsep.no_warm_start,
                       "Do not seed the search with the two-phase plan");
  nonsep_cmd->add_option("-o,--output", nonsep.output, "Result JSON (default: stdout)");

  TuneArgs tune;
  CLI::App* tune_cmd = app.add_subcommand("tune", "Tune a benchmark scheme's parameter");
  tune_cmd->add_option("instance", tune.instance, "Instance JSON")->required();
  tune_cmd->add_option("--scheme", tune.scheme, "detour, distance, flat or individual")
      ->required();
  add_floor(tune_cmd, tune.floor);
  tune_cmd->add_option("-o,--output", tune.output, "Result JSON (default: stdout)");

  SweepArgs sw;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Evaluate schemes over a parameter grid");
  sweep_cmd->add_option("--models", sw.models, "Acceptance models")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--drivers", sw.drivers, "Driver counts O")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--rhos", sw.rhos, "Penalty factors")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--mus", sw.mus, "Distance-utility weights")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--seeds", sw.seeds, "Seeds")
      ->delimiter(',')
      ->envname("CROWDCOMP_SEED")
      ->capture_default_str();
  sweep_cmd->add_option("--tasks", sw.tasks, "Tasks per instance")->capture_default_str();
  sweep_cmd->add_option("--schemes", sw.schemes, "Schemes to evaluate")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--dataset-rows", sw.dataset_rows,
                        "Simulated decisions per logistic fit")
      ->capture_default_str();
  sweep_cmd->add_option("--jobs", sw.jobs, "Worker threads")
      ->envname("CROWDCOMP_JOBS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_flag("--timing", sw.timing, "Record wall_time_ms (makes output non-deterministic)");
  add_floor(sweep_cmd, sw.floor);
  sweep_cmd->add_option("-o,--output", sw.output, "Results CSV (resumed when it exists)")
      ->required();

  StatsArgs st;
  CLI::App* stats_cmd = app.add_subcommand("stats", "Summarize a results CSV");
  stats_cmd->add_option("results", st.results, "Results CSV")->required();
  stats_cmd->add_option("--metric", st.metric,
                        "expected_cost, cost_saving_pct, expected_distance, "
                        "distance_saving_pct, fraction_offered, mean_acceptance or p")
      ->capture_default_str();
  stats_cmd->add_option("--compare", st.compare, "Paired t test between two schemes: A,B")
      ->delimiter(',');
  stats_cmd->add_option("--trend", st.trend, "Per-level means along O, rho or mu");
  stats_cmd->add_option("--scheme", st.scheme, "Restrict --trend to one scheme");
  stats_cmd->add_option("--model", st.model, "Restrict to one acceptance model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*solve_cmd) return run_solve(solve);
    if (*nonsep_cmd) return run_nonsep(nonsep);
    if (*tune_cmd) return run_tune(tune);
    if (*sweep_cmd) return run_sweep(sw);
    if (*stats_cmd) return run_stats(st);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitInput;
}
