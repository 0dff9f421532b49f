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

// Synthetic instances and the logistic calibration pipeline.
//
// Destinations are uniform on the plane and rounded to two decimals; the
// store sits in the middle. Company cost is the store-to-destination
// distance, the penalized cost is (1 + rho) times that. Linear acceptance:
//
//     alpha_ij = mu * d_j / (d_i + d_ij)
//     beta_ij  = detour_ij * U[0.5, 2]     (floored at 1e-6)
//
// Logistic parameters come from a logistic regression fitted to simulated
// accept/reject decisions under the linear model.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "crowdcomp/acceptance.hpp"
#include "crowdcomp/model.hpp"

namespace crowdcomp {

inline constexpr double kMinBeta = 1e-6;

struct GenConfig {
  std::size_t tasks = 100;
  std::size_t drivers = 100;
  double rho = 0.0;
  double mu = 0.5;
  std::uint64_t seed = 1;
  ModelKind model = ModelKind::kLinear;
  double plane_size = 200.0;
  CapRule cap_rule = CapRule::kCompanyCost;
  std::size_t dataset_rows = 100000;  // logistic calibration only
};

// Throws InputError for counts of zero or parameters out of range.
void validate(const GenConfig& cfg);

struct DecisionDataset {
  std::vector<double> d_i;
  std::vector<double> d_j;
  std::vector<double> detour;
  std::vector<double> compensation;
  std::vector<double> sensitivity;  // beta of the sampled pair
  std::vector<std::uint8_t> accepted;

  std::size_t size() const { return accepted.size(); }
  // Rows [begin, end).
  DecisionDataset slice(std::size_t begin, std::size_t end) const;
};

// Each row samples a fresh task/driver destination pair and a compensation
// from U[0, plane_size / sqrt(2)], then draws the decision from the linear
// acceptance probability.
DecisionDataset simulate_decisions(const GenConfig& cfg, std::size_t rows);

inline constexpr std::size_t kNumFeatures = 5;
inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "d_i", "d_j", "detour", "compensation", "sensitivity"};
inline constexpr std::size_t kCompensationFeature = 3;

struct LogisticFit {
  double intercept = 0.0;
  std::array<double, kNumFeatures> coef{};  // unstandardized
  std::array<double, kNumFeatures> mean{};
  std::array<double, kNumFeatures> scale{};
  double standardized_intercept = 0.0;
  std::array<double, kNumFeatures> standardized_coef{};
  double log_likelihood = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;

  // Linear predictor for raw feature values.
  double eta(double d_i, double d_j, double detour, double compensation,
             double sensitivity) const;
};

struct FitOptions {
  double gradient_tolerance = 1e-8;  // on the mean log-likelihood gradient
  int max_iterations = 100;
};

// Newton / IRLS maximum likelihood on z-scored features with step halving.
// Throws InputError for a single-class or constant-feature dataset and
// SolverError for separable data, non-convergence, or a compensation
// coefficient that is not positive.
LogisticFit fit_logistic(const DecisionDataset& data, const FitOptions& options = {});

// Mean negative log-likelihood of the fit on `data`.
double log_loss(const LogisticFit& fit, const DecisionDataset& data);
// Same for a constant acceptance rate.
double log_loss(double rate, const DecisionDataset& data);

// Turns a linear instance into a logistic one: gamma from the non-
// compensation terms of the fit at each pair's features, delta the
// compensation coefficient, cap c_i. Records the fit in inst.calibration.
ProblemInstance calibrate_pairs(const ProblemInstance& linear, const LogisticFit& fit);

// Linear instance for cfg regardless of cfg.model.
ProblemInstance generate_linear(const GenConfig& cfg);

// Instance of cfg.model. Logistic instances simulate cfg.dataset_rows
// decisions and fit them unless a fit is supplied.
ProblemInstance generate(const GenConfig& cfg, const LogisticFit* fit = nullptr);

std::string dataset_to_csv(const DecisionDataset& data);

}  // namespace crowdcomp
