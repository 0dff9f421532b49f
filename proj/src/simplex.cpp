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

#include "crowdcomp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "crowdcomp/kernels.hpp"

namespace crowdcomp::lp {

std::size_t LinearProgram::add_column(double c, double lo, double hi) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  return cost.size() - 1;
}

std::size_t LinearProgram::add_row(std::vector<Term> terms, RowSense sense,
                                   double rhs) {
  for (const Term& t : terms) {
    if (t.column >= num_columns()) {
      throw std::out_of_range("row references unknown column");
    }
  }
  rows.push_back({std::move(terms), sense, rhs});
  return rows.size() - 1;
}

double LinearProgram::objective_value(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t j = 0; j < cost.size(); ++j) total += cost[j] * x[j];
  return total;
}

double LinearProgram::row_activity(std::size_t r,
                                   std::span<const double> x) const {
  double total = 0.0;
  for (const Term& t : rows[r].terms) total += t.coefficient * x[t.column];
  return total;
}

bool LinearProgram::is_feasible(std::span<const double> x,
                                double tolerance) const {
  if (x.size() != num_columns()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lower[j] - tolerance || x[j] > upper[j] + tolerance) return false;
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double a = row_activity(r, x);
    const double b = rows[r].rhs;
    switch (rows[r].sense) {
      case RowSense::kLessEqual:
        if (a > b + tolerance) return false;
        break;
      case RowSense::kGreaterEqual:
        if (a < b - tolerance) return false;
        break;
      case RowSense::kEqual:
        if (std::abs(a - b) > tolerance) return false;
        break;
    }
  }
  return true;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kTieTolerance = 1e-12;
constexpr double kZero = 1e-11;  // tableau entries below this count as zero
constexpr std::size_t kRefreshInterval = 64;

enum class State : std::uint8_t { kBasic, kLower, kUpper };

class Tableau {
 public:
  Tableau(const LinearProgram& lp, std::span<const double> lower,
          std::span<const double> upper, const SimplexOptions& options)
      : opt_(options), kernels_(kernels::active()) {
    m_ = lp.num_rows();
    n_ = lp.num_columns();
    std::size_t slacks = 0;
    for (const Row& row : lp.rows) {
      if (row.sense != RowSense::kEqual) ++slacks;
    }
    first_artificial_ = n_ + slacks;
    cols_ = first_artificial_ + m_;
    max_iterations_ = options.max_iterations
                          ? options.max_iterations
                          : 50 * (m_ + cols_) + 1000;

    T_.assign(m_ * cols_, 0.0);
    rhs_.assign(m_, 0.0);
    lo_.assign(cols_, 0.0);
    hi_.assign(cols_, kInf);
    d_.assign(cols_, 0.0);
    xb_.assign(m_, 0.0);
    basis_.assign(m_, kNone);
    state_.assign(cols_, State::kLower);
    barred_.assign(cols_, 0);

    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = lower[j];
      hi_[j] = upper[j];
      if (lo_[j] > hi_[j] + opt_.feasibility_tolerance) bounds_conflict_ = true;
      if (std::isfinite(lo_[j])) {
        state_[j] = State::kLower;
      } else if (std::isfinite(hi_[j])) {
        state_[j] = State::kUpper;
      } else {
        throw std::invalid_argument("simplex: free columns are not supported");
      }
    }

    std::size_t slack = n_;
    for (std::size_t r = 0; r < m_; ++r) {
      const Row& row = lp.rows[r];
      double* t = row_ptr(r);
      for (const Term& term : row.terms) t[term.column] += term.coefficient;
      if (row.sense == RowSense::kLessEqual) t[slack++] = 1.0;
      if (row.sense == RowSense::kGreaterEqual) t[slack++] = -1.0;
      double residual = row.rhs;
      for (std::size_t j = 0; j < n_; ++j) {
        if (t[j] != 0.0) residual -= t[j] * nonbasic_value(j);
      }
      const double sign = residual < 0.0 ? -1.0 : 1.0;
      if (sign < 0.0) {
        for (std::size_t j = 0; j < first_artificial_; ++j) t[j] = -t[j];
      }
      rhs_[r] = sign * row.rhs;
      const std::size_t art = first_artificial_ + r;
      t[art] = 1.0;
      basis_[r] = art;
      state_[art] = State::kBasic;
      xb_[r] = std::abs(residual);
    }
  }

  LpSolution solve() {
    LpSolution out;
    if (bounds_conflict_) {
      out.status = LpStatus::kInfeasible;
      return out;
    }

    std::vector<double> phase_one(cols_, 0.0);
    for (std::size_t j = first_artificial_; j < cols_; ++j) phase_one[j] = 1.0;
    LpStatus status = run(phase_one);
    out.iterations = iterations_;
    if (status == LpStatus::kIterationLimit) {
      out.status = status;
      return out;
    }
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] >= first_artificial_ &&
          xb_[r] > opt_.feasibility_tolerance) {
        out.status = LpStatus::kInfeasible;
        return out;
      }
    }
    evict_artificials();

    status = run(cost_);
    out.iterations = iterations_;
    out.status = status;
    if (status != LpStatus::kOptimal) return out;

    out.values.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      if (state_[j] != State::kBasic) out.values[j] = nonbasic_value(j);
    }
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) {
        // Harris steps may leave a basic value a hair outside its bounds.
        const std::size_t b = basis_[r];
        out.values[b] = std::clamp(xb_[r], lo_[b], hi_[b]);
      }
    }
    double objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) objective += cost_[j] * out.values[j];
    out.objective = objective;
    return out;
  }

  void set_cost(const std::vector<double>& cost) {
    cost_.assign(cols_, 0.0);
    std::copy(cost.begin(), cost.end(), cost_.begin());
  }

 private:
  double* row_ptr(std::size_t r) { return T_.data() + r * cols_; }

  double nonbasic_value(std::size_t j) const {
    return state_[j] == State::kUpper ? hi_[j] : lo_[j];
  }

  void refresh_basic_values() {
    xb_ = rhs_;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (state_[j] == State::kBasic) continue;
      const double v = nonbasic_value(j);
      if (v == 0.0) continue;
      for (std::size_t r = 0; r < m_; ++r) xb_[r] -= T_[r * cols_ + j] * v;
    }
  }

  void price(const std::vector<double>& cost) {
    d_ = cost;
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb != 0.0) kernels_.axpy(-cb, row_ptr(r), d_.data(), cols_);
    }
    for (std::size_t r = 0; r < m_; ++r) d_[basis_[r]] = 0.0;
  }

  void pivot(std::size_t r, std::size_t q) {
    double* pr = row_ptr(r);
    const double inv = 1.0 / pr[q];
    for (std::size_t j = 0; j < cols_; ++j) pr[j] *= inv;
    rhs_[r] *= inv;
    pr[q] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* pi = row_ptr(i);
      const double f = pi[q];
      if (f == 0.0) continue;
      kernels_.axpy(-f, pr, pi, cols_);
      rhs_[i] -= f * rhs_[r];
      pi[q] = 0.0;
    }
    const double f = d_[q];
    if (f != 0.0) kernels_.axpy(-f, pr, d_.data(), cols_);
    d_[q] = 0.0;
  }

  LpStatus run(const std::vector<double>& cost) {
    price(cost);
    std::size_t degenerate = 0;
    bool bland = false;
    std::size_t since_refresh = 0;
    while (true) {
      if (++iterations_ > max_iterations_) return LpStatus::kIterationLimit;

      std::size_t q = kNone;
      double best = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (state_[j] == State::kBasic || barred_[j]) continue;
        if (!(hi_[j] > lo_[j])) continue;
        double score = 0.0;
        if (state_[j] == State::kLower && d_[j] < -opt_.optimality_tolerance) {
          score = -d_[j];
        } else if (state_[j] == State::kUpper &&
                   d_[j] > opt_.optimality_tolerance) {
          score = d_[j];
        } else {
          continue;
        }
        if (bland) {
          q = j;
          break;
        }
        if (score > best) {
          best = score;
          q = j;
        }
      }
      if (q == kNone) {
        refresh_basic_values();
        return LpStatus::kOptimal;
      }

      const double dir = state_[q] == State::kLower ? 1.0 : -1.0;
      const double range = hi_[q] - lo_[q];
      std::size_t leave = kNone;
      bool leave_to_upper = false;
      double theta = range;
      // Exact step to the bound row r's basic variable hits, `slack` allowed.
      const auto row_limit = [&](std::size_t r, double slack, bool& to_upper) {
        const double a = T_[r * cols_ + q];
        const double rate = -dir * a;
        const std::size_t b = basis_[r];
        if (rate < 0.0) {
          to_upper = false;
          return std::max(xb_[r] - lo_[b] + slack, 0.0) / -rate;
        }
        to_upper = true;
        if (!std::isfinite(hi_[b])) return kInf;
        return std::max(hi_[b] - xb_[r] + slack, 0.0) / rate;
      };
      if (bland) {
        for (std::size_t r = 0; r < m_; ++r) {
          if (std::abs(T_[r * cols_ + q]) <= opt_.pivot_tolerance) continue;
          bool to_upper = false;
          const double limit = row_limit(r, 0.0, to_upper);
          if (limit < theta - kTieTolerance ||
              (leave != kNone && limit <= theta + kTieTolerance &&
               basis_[r] < basis_[leave])) {
            theta = limit;
            leave = r;
            leave_to_upper = to_upper;
          }
        }
      } else {
        // Harris: bound the step with relaxed bounds, then take the largest
        // pivot among rows that block within that bound.
        double relaxed = range;
        for (std::size_t r = 0; r < m_; ++r) {
          if (std::abs(T_[r * cols_ + q]) <= kZero) continue;
          bool to_upper = false;
          relaxed = std::min(
              relaxed, row_limit(r, opt_.feasibility_tolerance, to_upper));
        }
        if (range <= relaxed) {
          theta = range;
        } else {
          double best_pivot = 0.0;
          for (std::size_t r = 0; r < m_; ++r) {
            const double a = std::abs(T_[r * cols_ + q]);
            if (a <= kZero) continue;
            bool to_upper = false;
            const double limit = row_limit(r, 0.0, to_upper);
            if (limit <= relaxed && a > best_pivot) {
              best_pivot = a;
              theta = limit;
              leave = r;
              leave_to_upper = to_upper;
            }
          }
        }
      }
      if (!std::isfinite(theta)) return LpStatus::kUnbounded;

      if (theta > 0.0) {
        const double step = dir * theta;
        for (std::size_t r = 0; r < m_; ++r) {
          xb_[r] -= step * T_[r * cols_ + q];
        }
      }
      if (leave == kNone) {
        state_[q] = state_[q] == State::kLower ? State::kUpper : State::kLower;
      } else {
        const double entering =
            dir > 0.0 ? lo_[q] + theta : hi_[q] - theta;
        const std::size_t b = basis_[leave];
        state_[b] = leave_to_upper ? State::kUpper : State::kLower;
        pivot(leave, q);
        basis_[leave] = q;
        state_[q] = State::kBasic;
        xb_[leave] = entering;
      }

      if (theta <= kTieTolerance) {
        if (++degenerate > opt_.degenerate_pivots_before_bland) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
      if (++since_refresh >= kRefreshInterval) {
        refresh_basic_values();
        since_refresh = 0;
      }
    }
  }

  // Pivots basic artificials (all at zero after a feasible phase one) out of
  // the basis where possible and bars every artificial from re-entering.
  void evict_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < first_artificial_) continue;
      std::size_t q = kNone;
      double best = opt_.pivot_tolerance;
      const double* pr = row_ptr(r);
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (state_[j] == State::kBasic) continue;
        if (std::abs(pr[j]) > best) {
          best = std::abs(pr[j]);
          q = j;
        }
      }
      if (q == kNone) continue;  // redundant row
      const std::size_t art = basis_[r];
      const double entering = nonbasic_value(q);
      state_[art] = State::kLower;
      pivot(r, q);
      basis_[r] = q;
      state_[q] = State::kBasic;
      xb_[r] = entering;
    }
    for (std::size_t j = first_artificial_; j < cols_; ++j) {
      barred_[j] = 1;
      hi_[j] = 0.0;
    }
    refresh_basic_values();
  }

  SimplexOptions opt_;
  const kernels::KernelTable& kernels_;
  std::size_t m_ = 0, n_ = 0, cols_ = 0, first_artificial_ = 0;
  std::size_t iterations_ = 0, max_iterations_ = 0;
  bool bounds_conflict_ = false;
  std::vector<double> T_, rhs_, lo_, hi_, cost_, d_, xb_;
  std::vector<std::size_t> basis_;
  std::vector<State> state_;
  std::vector<std::uint8_t> barred_;
};

}  // namespace

LpSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& options) {
  return simplex_solve(lp, lp.lower, lp.upper, options);
}

LpSolution simplex_solve(const LinearProgram& lp, std::span<const double> lower,
                         std::span<const double> upper,
                         const SimplexOptions& options) {
  if (lower.size() != lp.num_columns() || upper.size() != lp.num_columns()) {
    throw std::invalid_argument("simplex: bound vectors have wrong size");
  }
  Tableau tableau(lp, lower, upper, options);
  tableau.set_cost(lp.cost);
  return tableau.solve();
}

}  // namespace crowdcomp::lp
