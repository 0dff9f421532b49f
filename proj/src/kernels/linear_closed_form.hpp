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

#include <cstdint>

namespace crowdcomp::kernels {

// Linear-model closed form for one pair. This is the reference sequence of
// floating-point operations that every kernel variant reproduces.
inline void linear_compensation_one(double alpha, double beta, double c_prime,
                                    double cap, double floor, double& c,
                                    double& p, double& w, std::int8_t& clamp) {
  if (!(cap > 0.0)) {
    c = 0.0;
    p = 0.0;
    w = c_prime;
    clamp = 2;
    return;
  }
  double v = 0.5 * c_prime - alpha / (2.0 * beta);
  std::int8_t code = 0;
  if (v < floor) {
    v = floor;
    code = 1;
  }
  if (v > cap) {
    v = cap;
    code = 2;
  }
  const double q = alpha + beta * v;
  p = q < 1.0 ? q : 1.0;
  c = v;
  w = p * v + (1.0 - p) * c_prime;
  clamp = code;
}

}  // namespace crowdcomp::kernels
