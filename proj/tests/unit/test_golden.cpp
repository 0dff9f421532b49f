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

#include <cmath>

#include <gtest/gtest.h>

#include "crowdcomp/golden.hpp"

namespace crowdcomp {
namespace {

TEST(GoldenSection, Quadratic) {
  const auto r = golden_section_minimize([](double p) { return (p - 3) * (p - 3); }, 0.0,
                                         10.0, 1e-8);
  EXPECT_NEAR(r.x, 3.0, 1e-6);
  EXPECT_NEAR(r.value, 0.0, 1e-12);
  EXPECT_GT(r.evaluations, 0);
}

TEST(GoldenSection, MinimumAtBoundary) {
  const auto r = golden_section_minimize([](double p) { return p; }, 1.0, 2.0, 1e-9);
  EXPECT_NEAR(r.x, 1.0, 1e-8);
}

TEST(GoldenSection, DegenerateInterval) {
  const auto r = golden_section_minimize([](double p) { return std::cos(p); }, 2.0, 2.0, 1e-9);
  EXPECT_EQ(r.x, 2.0);
  EXPECT_EQ(r.value, std::cos(2.0));
}

TEST(GoldenSection, IterationCapRespected) {
  int calls = 0;
  const auto r = golden_section_minimize(
      [&](double p) {
        ++calls;
        return std::abs(p - 0.7);
      },
      0.0, 1.0, 0.0, 5);
  EXPECT_EQ(r.evaluations, calls);
  EXPECT_LE(calls, 8);
}

}  // namespace
}  // namespace crowdcomp
