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

#include "crowdcomp/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "crowdcomp/golden.hpp"
#include "crowdcomp/kernels.hpp"
#include "kernels/linear_closed_form.hpp"

namespace crowdcomp {
namespace {

constexpr int kMaxHalleyIterations = 50;
constexpr double kHalleyStep = 1e-14;

// Halley on w * e^w = x. Used for x up to ~1e30; beyond that the log-domain
// form is better conditioned.
double lambert_w0_direct(double x) {
  double w = x <= M_E ? std::log1p(x) : [&] {
    const double l = std::log(x);
    return l - std::log(l);
  }();
  for (int it = 0; it < kMaxHalleyIterations; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (!(std::abs(step) > kHalleyStep * std::abs(w))) break;
  }
  return w;
}

// Halley on w + ln w = y, w > 0.
double lambert_w0_log_domain(double y) {
  double w = y - std::log(y);
  for (int it = 0; it < kMaxHalleyIterations; ++it) {
    const double f = w + std::log(w) - y;
    const double fp = 1.0 + 1.0 / w;
    const double fpp = -1.0 / (w * w);
    double step = 2.0 * f * fp / (2.0 * fp * fp - f * fpp);
    // Keep the iterate positive.
    while (w - step <= 0.0) step *= 0.5;
    w -= step;
    if (!(std::abs(step) > kHalleyStep * w)) break;
  }
  return w;
}

CompensationResult degenerate_offer(double c_prime) {
  return {0.0, 0.0, c_prime, Clamp::kUpper};
}

}  // namespace

double linear_probability(double alpha, double beta, double compensation) {
  if (!(compensation > 0.0)) return 0.0;
  const double q = alpha + beta * compensation;
  return q < 1.0 ? q : 1.0;
}

double logistic_probability(double gamma, double delta, double compensation) {
  if (!(compensation > 0.0)) return 0.0;
  const double z = gamma + delta * compensation;
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double acceptance_probability(const PairParams& pair, double compensation) {
  switch (pair.kind) {
    case ModelKind::kLinear:
      return linear_probability(pair.alpha, pair.beta, compensation);
    case ModelKind::kLogistic:
      return logistic_probability(pair.gamma, pair.delta, compensation);
    case ModelKind::kGeneric:
      return pair.curve(compensation);
  }
  return 0.0;
}

double lambert_w0(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) throw std::domain_error("lambert_w0: argument must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;
  if (x > 1e30) return lambert_w0_log_domain(std::log(x));
  return lambert_w0_direct(x);
}

double lambert_w0_of_exp(double y) {
  if (std::isnan(y)) return y;
  if (y == std::numeric_limits<double>::infinity()) return y;
  // W(x) = x - x^2 + ..., and x^2 is below double resolution here.
  if (y < -40.0) return std::exp(y);
  if (y <= 1.0) return lambert_w0_direct(std::exp(y));
  return lambert_w0_log_domain(y);
}

double linear_cap(double alpha, double beta, double company_cost,
                  double penalized_cost, CapRule rule) {
  const double bound =
      rule == CapRule::kCompanyCost ? company_cost : penalized_cost;
  return std::min(bound, (1.0 - alpha) / beta);
}

CompensationResult optimal_compensation_linear(double alpha, double beta,
                                               double c_prime, double cap,
                                               double floor) {
  CompensationResult r;
  std::int8_t code = 0;
  kernels::linear_compensation_one(alpha, beta, c_prime, cap, floor,
                                   r.compensation, r.probability, r.weight,
                                   code);
  r.clamp = static_cast<Clamp>(code);
  return r;
}

CompensationResult optimal_compensation_logistic(double gamma, double delta,
                                                 double c_prime, double cap,
                                                 double floor) {
  if (!(cap > 0.0)) return degenerate_offer(c_prime);
  const double w = lambert_w0_of_exp(gamma + delta * c_prime - 1.0);
  double c = (delta * c_prime - 1.0 - w) / delta;
  Clamp clamp = Clamp::kNone;
  if (c < floor) {
    c = floor;
    clamp = Clamp::kLower;
  }
  if (c > cap) {
    c = cap;
    clamp = Clamp::kUpper;
  }
  const double p = logistic_probability(gamma, delta, c);
  return {c, p, offer_weight(p, c, c_prime), clamp};
}

CompensationResult optimal_compensation_generic(
    const std::function<double(double)>& probability, double c_prime,
    double cap, const GenericSearch& search) {
  if (!(cap > 0.0)) return degenerate_offer(c_prime);
  const double lo = std::min(search.floor, cap);
  const std::size_t n = std::max<std::size_t>(search.grid_points, 2);
  const double step = (cap - lo) / static_cast<double>(n - 1);
  auto objective = [&](double c) { return probability(c) * (c - c_prime); };
  auto grid_point = [&](std::size_t k) {
    return k + 1 == n ? cap : lo + step * static_cast<double>(k);
  };

  std::size_t best_k = 0;
  double best_value = objective(lo);
  for (std::size_t k = 1; k < n; ++k) {
    const double v = objective(grid_point(k));
    if (v < best_value) {
      best_value = v;
      best_k = k;
    }
  }
  double best_c = grid_point(best_k);

  if (step > 0.0) {
    const double a = grid_point(best_k == 0 ? 0 : best_k - 1);
    const double b = grid_point(std::min(best_k + 1, n - 1));
    const GoldenResult refined = golden_section_minimize(
        objective, a, b, search.relative_tolerance * cap, 200);
    if (refined.value < best_value) {
      best_value = refined.value;
      best_c = refined.x;
    }
  }

  const double p = probability(best_c);
  Clamp clamp = Clamp::kNone;
  if (best_c <= lo) clamp = Clamp::kLower;
  if (best_c >= cap) clamp = Clamp::kUpper;
  return {best_c, p, offer_weight(p, best_c, c_prime), clamp};
}

CompensationResult optimal_compensation(const PairParams& pair, double c_prime,
                                        double floor) {
  switch (pair.kind) {
    case ModelKind::kLinear:
      return optimal_compensation_linear(pair.alpha, pair.beta, c_prime,
                                         pair.cap, floor);
    case ModelKind::kLogistic:
      return optimal_compensation_logistic(pair.gamma, pair.delta, c_prime,
                                           pair.cap, floor);
    case ModelKind::kGeneric: {
      GenericSearch search;
      search.floor = floor;
      return optimal_compensation_generic(
          [&pair](double c) { return pair.curve(c); }, c_prime, pair.cap,
          search);
    }
  }
  return degenerate_offer(c_prime);
}

void optimal_compensation_linear_batch(const LinearBatch& batch, double floor) {
  const std::size_t n = batch.alpha.size();
  if (batch.beta.size() != n || batch.c_prime.size() != n ||
      batch.cap.size() != n || batch.compensation.size() != n ||
      batch.probability.size() != n || batch.weight.size() != n ||
      batch.clamp.size() != n) {
    throw std::invalid_argument("linear batch: mismatched array lengths");
  }
  const kernels::LinearCompensationArgs args{
      batch.alpha.data(),
      batch.beta.data(),
      batch.c_prime.data(),
      batch.cap.data(),
      floor,
      batch.compensation.data(),
      batch.probability.data(),
      batch.weight.data(),
      reinterpret_cast<std::int8_t*>(batch.clamp.data()),
      n};
  kernels::active().linear_compensation(args);
}

}  // namespace crowdcomp
