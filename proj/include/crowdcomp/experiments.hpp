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

// Scheme evaluation, parameter sweeps and summary statistics.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crowdcomp/gen.hpp"
#include "crowdcomp/model.hpp"
#include "crowdcomp/schemes.hpp"
#include "crowdcomp/stats.hpp"

namespace crowdcomp {

struct ExperimentRecord {
  ModelKind model = ModelKind::kLinear;
  std::size_t drivers = 0;  // O
  std::size_t tasks = 0;
  double rho = 0.0;
  double mu = 0.0;
  std::uint64_t seed = 0;
  SchemeKind scheme = SchemeKind::kIndividual;
  double p = kNaN;  // tuned parameter, NaN for the individual scheme
  double expected_cost = 0.0;
  double cost_saving_pct = 0.0;
  double expected_distance = 0.0;
  double distance_saving_pct = 0.0;
  double fraction_offered = 0.0;
  std::optional<double> mean_acceptance;  // empty when nothing is offered
  std::optional<double> wall_time_ms;
  double baseline_cost = 0.0;
  double baseline_distance = 0.0;
  OfferPlan plan;  // empty for records read back from CSV
};

// 100 * (baseline - value) / baseline, 0 for a zero baseline.
double saving_pct(double baseline, double value);

// Fills the metrics of `plan` (which must be evaluated) for `inst`.
ExperimentRecord make_record(const ProblemInstance& inst, SchemeKind scheme, double p,
                             OfferPlan plan);

ExperimentRecord evaluate(const ProblemInstance& inst, SchemeKind scheme,
                          const TuneOptions& options = {}, bool timing = false);

struct SweepConfig {
  std::vector<ModelKind> models{ModelKind::kLinear};
  std::vector<std::size_t> drivers{50};
  std::vector<double> rhos{0.0};
  std::vector<double> mus{0.5};
  std::vector<std::uint64_t> seeds{1};
  std::size_t tasks = 100;
  std::vector<SchemeKind> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
  std::size_t dataset_rows = 100000;
  unsigned jobs = 1;
  bool timing = false;  // wall_time_ms stays empty otherwise
  TuneOptions tune;
};

inline const char* const kCsvHeader =
    "model,O,rho,mu,seed,scheme,p,expected_cost,cost_saving_pct,expected_distance,"
    "distance_saving_pct,fraction_offered,mean_acceptance,wall_time_ms";

std::string record_key(const ExperimentRecord& r);  // first six CSV fields
std::string to_csv_row(const ExperimentRecord& r);
std::vector<ExperimentRecord> records_from_csv(std::string_view text);

// Evaluates every (model, O, rho, mu, seed, scheme) combination in that
// sort order. With a csv path the rows are written there in order; rows
// already present in the file (or in an interrupted run's ".partial" file)
// are kept and not recomputed. Returned records cover only the rows
// computed by this call.
std::vector<ExperimentRecord> sweep(const SweepConfig& cfg,
                                    const std::filesystem::path* csv = nullptr);

// Named metric of a record; empty for a null mean_acceptance.
std::optional<double> metric_value(const ExperimentRecord& r, std::string_view metric);

// Paired t test of `metric` between two record sets matched on instance
// (model, O, rho, mu, seed). Throws InputError when the instance sets differ.
PairedT paired_t(const std::vector<ExperimentRecord>& a,
                 const std::vector<ExperimentRecord>& b, std::string_view metric);

enum class TrendAxis { kDrivers, kRho, kMu };
TrendAxis parse_trend_axis(std::string_view name);

struct TrendLevel {
  double level = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
};

// Mean of `metric` per level of `axis`, ascending by level. Records with a
// null metric are skipped.
std::vector<TrendLevel> trend_report(const std::vector<ExperimentRecord>& records,
                                     TrendAxis axis, std::string_view metric);

}  // namespace crowdcomp
