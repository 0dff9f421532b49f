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

#include <limits>

#include "kernels/kernels_impl.hpp"
#include "kernels/linear_closed_form.hpp"

namespace crowdcomp::kernels::scalar {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

double dot(const double* x, const double* y, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 = s0 + x[i] * y[i];
    s1 = s1 + x[i + 1] * y[i + 1];
    s2 = s2 + x[i + 2] * y[i + 2];
    s3 = s3 + x[i + 3] * y[i + 3];
  }
  double r = (s0 + s2) + (s1 + s3);
  for (; i < n; ++i) r = r + x[i] * y[i];
  return r;
}

void linear_compensation(const LinearCompensationArgs& a) {
  for (std::size_t i = 0; i < a.n; ++i) {
    linear_compensation_one(a.alpha[i], a.beta[i], a.c_prime[i], a.cap[i],
                            a.floor, a.compensation[i], a.probability[i],
                            a.weight[i], a.clamp[i]);
  }
}

ScanResult assignment_scan(const AssignmentScanArgs& a) {
  ScanResult best{a.n, std::numeric_limits<double>::infinity()};
  for (std::size_t j = 0; j < a.n; ++j) {
    if (a.used[j]) continue;
    const double cur = (a.row[j] - a.row_potential) - a.col_potential[j];
    if (cur < a.min_slack[j]) {
      a.min_slack[j] = cur;
      a.way[j] = a.from_column;
    }
    if (a.min_slack[j] < best.value) {
      best.value = a.min_slack[j];
      best.index = j;
    }
  }
  return best;
}

}  // namespace crowdcomp::kernels::scalar
