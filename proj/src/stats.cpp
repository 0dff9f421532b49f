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

#include "crowdcomp/stats.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "crowdcomp/error.hpp"

namespace crowdcomp {

double student_t_cdf(double t, double dof) {
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const boost::math::students_t dist(dof);
  return boost::math::cdf(dist, t);
}

PairedT paired_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("paired samples differ in length");
  if (a.size() < 2) throw InputError("paired t test needs at least two pairs");
  PairedT out;
  out.n = a.size();
  const double n = static_cast<double>(out.n);
  double sum = 0.0;
  for (std::size_t k = 0; k < out.n; ++k) sum += a[k] - b[k];
  out.mean_diff = sum / n;
  double ss = 0.0;
  for (std::size_t k = 0; k < out.n; ++k) {
    const double d = a[k] - b[k] - out.mean_diff;
    ss += d * d;
  }
  out.sd_diff = std::sqrt(ss / (n - 1.0));
  if (out.sd_diff == 0.0) {
    out.degenerate = true;
    if (out.mean_diff == 0.0) {
      out.t_stat = 0.0;
      out.p_value = 1.0;
    } else {
      out.t_stat = std::copysign(std::numeric_limits<double>::infinity(), out.mean_diff);
      out.p_value = 0.0;
    }
    return out;
  }
  out.t_stat = out.mean_diff / (out.sd_diff / std::sqrt(n));
  out.p_value = 2.0 * student_t_cdf(-std::abs(out.t_stat), n - 1.0);
  return out;
}

}  // namespace crowdcomp
