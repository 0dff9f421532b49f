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

#pragma once

#include <cstddef>
#include <span>

namespace crowdcomp {

// Student-t CDF with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

struct PairedT {
  std::size_t n = 0;
  double mean_diff = 0.0;
  double sd_diff = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;  // two-sided
  // Differences have zero variance: t is +-inf (0 when all differences are
  // 0) and p_value is 0 (1).
  bool degenerate = false;
};

// Paired t test on a[k] - b[k]. Throws InputError for unequal lengths or
// fewer than two pairs.
PairedT paired_t(std::span<const double> a, std::span<const double> b);

}  // namespace crowdcomp
