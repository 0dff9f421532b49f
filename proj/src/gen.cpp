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

#include "crowdcomp/gen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "crowdcomp/kernels.hpp"
#include "crowdcomp/rng.hpp"

namespace crowdcomp {
namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

Point random_point(RandomStream& rng, double size) {
  const double x = round2(rng.uniform(0.0, size));
  const double y = round2(rng.uniform(0.0, size));
  return {x, y};
}

struct PairGeometry {
  double d_i, d_j, d_ij, detour, alpha;
};

PairGeometry geometry(Point store, Point task, Point driver, double mu) {
  PairGeometry g;
  g.d_i = distance(store, task);
  g.d_j = distance(store, driver);
  g.d_ij = distance(task, driver);
  g.detour = g.d_i + g.d_ij - g.d_j;
  const double denom = g.d_i + g.d_ij;
  g.alpha = denom > 1e-12 ? std::clamp(mu * g.d_j / denom, 0.0, 1.0) : 0.0;
  return g;
}

double draw_beta(RandomStream& rng, double detour) {
  return std::max(detour * rng.uniform(0.5, 2.0), kMinBeta);
}

double log1p_exp(double eta) {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double sigmoid(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

void append(std::string& out, double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, r.ptr);
}

}  // namespace

void validate(const GenConfig& cfg) {
  if (cfg.tasks == 0) throw InputError("tasks must be >= 1");
  if (cfg.drivers == 0) throw InputError("drivers must be >= 1");
  if (!(cfg.rho >= 0.0) || !std::isfinite(cfg.rho)) throw InputError("rho must be >= 0");
  if (!(cfg.mu >= 0.0 && cfg.mu <= 1.0)) throw InputError("mu must be in [0, 1]");
  if (!(cfg.plane_size > 0.0) || !std::isfinite(cfg.plane_size)) {
    throw InputError("plane size must be > 0");
  }
  if (cfg.model == ModelKind::kGeneric) {
    throw InputError("generic instances cannot be generated");
  }
  if (cfg.model == ModelKind::kLogistic && cfg.dataset_rows < 2) {
    throw InputError("dataset rows must be >= 2");
  }
}

DecisionDataset DecisionDataset::slice(std::size_t begin, std::size_t end) const {
  DecisionDataset out;
  const auto cut = [&](const auto& v) {
    return std::decay_t<decltype(v)>(v.begin() + static_cast<std::ptrdiff_t>(begin),
                                     v.begin() + static_cast<std::ptrdiff_t>(end));
  };
  out.d_i = cut(d_i);
  out.d_j = cut(d_j);
  out.detour = cut(detour);
  out.compensation = cut(compensation);
  out.sensitivity = cut(sensitivity);
  out.accepted = cut(accepted);
  return out;
}

DecisionDataset simulate_decisions(const GenConfig& cfg, std::size_t rows) {
  const Point store{cfg.plane_size / 2.0, cfg.plane_size / 2.0};
  const double max_comp = cfg.plane_size / std::sqrt(2.0);
  DecisionDataset data;
  data.d_i.reserve(rows);
  data.d_j.reserve(rows);
  data.detour.reserve(rows);
  data.compensation.reserve(rows);
  data.sensitivity.reserve(rows);
  data.accepted.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    RandomStream rng(cfg.seed, StreamKind::kDecision, r);
    const Point task = random_point(rng, cfg.plane_size);
    const Point driver = random_point(rng, cfg.plane_size);
    const PairGeometry g = geometry(store, task, driver, cfg.mu);
    const double beta = draw_beta(rng, g.detour);
    const double c = rng.uniform(0.0, max_comp);
    const double p = linear_probability(g.alpha, beta, c);
    data.d_i.push_back(g.d_i);
    data.d_j.push_back(g.d_j);
    data.detour.push_back(g.detour);
    data.compensation.push_back(c);
    data.sensitivity.push_back(beta);
    data.accepted.push_back(rng.bernoulli(p) ? 1 : 0);
  }
  return data;
}

double LogisticFit::eta(double d_i, double d_j, double detour, double compensation,
                        double sensitivity) const {
  return intercept + coef[0] * d_i + coef[1] * d_j + coef[2] * detour +
         coef[3] * compensation + coef[4] * sensitivity;
}

LogisticFit fit_logistic(const DecisionDataset& data, const FitOptions& options) {
  const std::size_t n = data.size();
  constexpr std::size_t P = kNumFeatures + 1;
  const std::array<const std::vector<double>*, kNumFeatures> raw = {
      &data.d_i, &data.d_j, &data.detour, &data.compensation, &data.sensitivity};
  for (const auto* col : raw) {
    if (col->size() != n) throw InputError("dataset columns differ in length");
  }
  std::size_t positives = 0;
  for (std::uint8_t a : data.accepted) positives += a ? 1 : 0;
  if (n == 0 || positives == 0 || positives == n) {
    throw InputError("dataset has a single outcome class");
  }

  LogisticFit fit;
  // Column 0 is the intercept.
  std::array<std::vector<double>, P> z;
  z[0].assign(n, 1.0);
  for (std::size_t k = 0; k < kNumFeatures; ++k) {
    const std::vector<double>& col = *raw[k];
    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : col) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    if (!(sd > 0.0)) {
      throw InputError("feature " + std::string(kFeatureNames[k]) + " is constant");
    }
    fit.mean[k] = mean;
    fit.scale[k] = sd;
    z[k + 1].resize(n);
    for (std::size_t r = 0; r < n; ++r) z[k + 1][r] = (col[r] - mean) / sd;
  }
  std::vector<double> y(n);
  for (std::size_t r = 0; r < n; ++r) y[r] = data.accepted[r];

  const auto& kern = kernels::active();
  const double inv_n = 1.0 / static_cast<double>(n);
  Eigen::Matrix<double, P, 1> b = Eigen::Matrix<double, P, 1>::Zero();
  std::vector<double> eta(n), resid(n), w(n), wz(n);

  const auto predict = [&](const Eigen::Matrix<double, P, 1>& coef) {
    std::fill(eta.begin(), eta.end(), 0.0);
    for (std::size_t k = 0; k < P; ++k) kern.axpy(coef[k], z[k].data(), eta.data(), n);
  };
  const auto loglik = [&]() {
    double ll = 0.0;
    for (std::size_t r = 0; r < n; ++r) ll += y[r] * eta[r] - log1p_exp(eta[r]);
    return ll;
  };
  const auto separated = [&]() {
    for (std::size_t r = 0; r < n; ++r) {
      if ((eta[r] > 0.0) != (y[r] > 0.5) || eta[r] == 0.0) return false;
    }
    return true;
  };

  predict(b);
  double ll = loglik();
  int iter = 0;
  double grad_norm = 0.0;
  for (;; ++iter) {
    for (std::size_t r = 0; r < n; ++r) {
      const double p = sigmoid(eta[r]);
      resid[r] = y[r] - p;
      w[r] = p * (1.0 - p);
    }
    Eigen::Matrix<double, P, 1> grad;
    Eigen::Matrix<double, P, P> hess;
    for (std::size_t a = 0; a < P; ++a) {
      grad[a] = kern.dot(z[a].data(), resid.data(), n) * inv_n;
      for (std::size_t r = 0; r < n; ++r) wz[r] = w[r] * z[a][r];
      for (std::size_t c = 0; c <= a; ++c) {
        hess(a, c) = hess(c, a) = kern.dot(wz.data(), z[c].data(), n) * inv_n;
      }
    }
    grad_norm = grad.norm();
    if (grad_norm <= options.gradient_tolerance) break;
    if (iter >= options.max_iterations) {
      std::ostringstream msg;
      msg << "logistic fit did not converge after " << iter
          << " iterations (gradient norm " << grad_norm << ", log-likelihood " << ll
          << ")";
      throw SolverError(msg.str());
    }
    const Eigen::LDLT<Eigen::Matrix<double, P, P>> ldlt(hess);
    Eigen::Matrix<double, P, 1> step = ldlt.solve(grad);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      throw SolverError("logistic fit: singular Hessian at iteration " +
                        std::to_string(iter));
    }
    double t = 1.0;
    Eigen::Matrix<double, P, 1> next;
    double next_ll = ll;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      next = b + t * step;
      predict(next);
      next_ll = loglik();
      if (next_ll >= ll) break;
    }
    b = next;
    ll = next_ll;
    if (separated()) {
      std::ostringstream msg;
      msg << "logistic fit diverges: the outcomes are perfectly separated (iteration "
          << iter + 1 << ", log-likelihood " << ll << ")";
      throw SolverError(msg.str());
    }
  }

  fit.iterations = iter;
  fit.log_likelihood = ll;
  fit.gradient_norm = grad_norm;
  fit.standardized_intercept = b[0];
  fit.intercept = b[0];
  for (std::size_t k = 0; k < kNumFeatures; ++k) {
    fit.standardized_coef[k] = b[k + 1];
    fit.coef[k] = b[k + 1] / fit.scale[k];
    fit.intercept -= fit.coef[k] * fit.mean[k];
  }
  if (!(fit.coef[kCompensationFeature] > 0.0)) {
    throw SolverError("compensation coefficient not positive");
  }
  return fit;
}

double log_loss(const LogisticFit& fit, const DecisionDataset& data) {
  double total = 0.0;
  for (std::size_t r = 0; r < data.size(); ++r) {
    const double e = fit.eta(data.d_i[r], data.d_j[r], data.detour[r],
                             data.compensation[r], data.sensitivity[r]);
    total += log1p_exp(e) - (data.accepted[r] ? e : 0.0);
  }
  return total / static_cast<double>(data.size());
}

double log_loss(double rate, const DecisionDataset& data) {
  double total = 0.0;
  for (std::size_t r = 0; r < data.size(); ++r) {
    total -= std::log(data.accepted[r] ? rate : 1.0 - rate);
  }
  return total / static_cast<double>(data.size());
}

ProblemInstance generate_linear(const GenConfig& cfg) {
  GenConfig lin = cfg;
  lin.model = ModelKind::kLinear;
  validate(lin);
  ProblemInstance inst;
  inst.plane_size = cfg.plane_size;
  inst.store = {cfg.plane_size / 2.0, cfg.plane_size / 2.0};
  inst.rho = cfg.rho;
  inst.mu = cfg.mu;
  inst.seed = cfg.seed;
  inst.model = ModelKind::kLinear;
  for (std::size_t i = 0; i < cfg.tasks; ++i) {
    RandomStream rng(cfg.seed, StreamKind::kTask, i);
    Task t;
    t.id = static_cast<int>(i);
    t.dest = random_point(rng, cfg.plane_size);
    t.cost = distance(inst.store, t.dest);
    t.penalized_cost = (1.0 + cfg.rho) * t.cost;
    inst.tasks.push_back(t);
  }
  for (std::size_t j = 0; j < cfg.drivers; ++j) {
    RandomStream rng(cfg.seed, StreamKind::kDriver, j);
    inst.drivers.push_back({static_cast<int>(j), random_point(rng, cfg.plane_size)});
  }
  inst.pairs.resize(cfg.tasks * cfg.drivers);
  for (std::size_t i = 0; i < cfg.tasks; ++i) {
    const Task& t = inst.tasks[i];
    for (std::size_t j = 0; j < cfg.drivers; ++j) {
      RandomStream rng(cfg.seed, StreamKind::kPair, (std::uint64_t{i} << 32) | j);
      const PairGeometry g = geometry(inst.store, t.dest, inst.drivers[j].dest, cfg.mu);
      PairParams& p = inst.pair(i, j);
      p.task = static_cast<int>(i);
      p.driver = static_cast<int>(j);
      p.kind = ModelKind::kLinear;
      p.alpha = g.alpha;
      p.beta = draw_beta(rng, g.detour);
      p.detour = g.detour;
      p.cap = linear_cap(p.alpha, p.beta, t.cost, t.penalized_cost, cfg.cap_rule);
    }
  }
  return inst;
}

ProblemInstance calibrate_pairs(const ProblemInstance& linear, const LogisticFit& fit) {
  ProblemInstance inst = linear;
  inst.model = ModelKind::kLogistic;
  for (std::size_t i = 0; i < inst.num_tasks(); ++i) {
    const double d_i = inst.task_distance(i);
    for (std::size_t j = 0; j < inst.num_drivers(); ++j) {
      PairParams& p = inst.pair(i, j);
      const double d_j = inst.driver_distance(j);
      p.gamma = fit.intercept + fit.coef[0] * d_i + fit.coef[1] * d_j +
                fit.coef[2] * p.detour + fit.coef[4] * p.beta;
      p.delta = fit.coef[kCompensationFeature];
      p.cap = inst.tasks[i].cost;
      p.kind = ModelKind::kLogistic;
      p.alpha = kNaN;
      p.beta = kNaN;
    }
  }
  inst.calibration["intercept"] = fit.intercept;
  for (std::size_t k = 0; k < kNumFeatures; ++k) {
    inst.calibration["coef_" + std::string(kFeatureNames[k])] = fit.coef[k];
  }
  inst.calibration["log_likelihood"] = fit.log_likelihood;
  inst.calibration["iterations"] = fit.iterations;
  return inst;
}

ProblemInstance generate(const GenConfig& cfg, const LogisticFit* fit) {
  validate(cfg);
  ProblemInstance inst = generate_linear(cfg);
  if (cfg.model == ModelKind::kLinear) return inst;
  if (fit) return calibrate_pairs(inst, *fit);
  const LogisticFit own = fit_logistic(simulate_decisions(cfg, cfg.dataset_rows));
  ProblemInstance out = calibrate_pairs(inst, own);
  out.calibration["dataset_rows"] = static_cast<double>(cfg.dataset_rows);
  return out;
}

std::string dataset_to_csv(const DecisionDataset& data) {
  std::string out = "d_i,d_j,detour,compensation,sensitivity,accepted\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    append(out, data.d_i[r]);
    out += ',';
    append(out, data.d_j[r]);
    out += ',';
    append(out, data.detour[r]);
    out += ',';
    append(out, data.compensation[r]);
    out += ',';
    append(out, data.sensitivity[r]);
    out += data.accepted[r] ? ",1\n" : ",0\n";
  }
  return out;
}

}  // namespace crowdcomp
