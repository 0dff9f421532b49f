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

#include <functional>

namespace crowdcomp {

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

// Golden-section search for a minimum of f on [lo, hi]. Shrinks the bracket
// until its width is at most `tolerance` or `max_iterations` is reached and
// returns the best point evaluated (interior points plus the final
// midpoint). The endpoints themselves are not evaluated.
GoldenResult golden_section_minimize(const std::function<double(double)>& f,
                                     double lo, double hi, double tolerance,
                                     int max_iterations = 100);

}  // namespace crowdcomp
