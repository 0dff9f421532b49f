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

// Seeded random streams.
//
// Every generated entity (task, driver, pair, dataset row) draws from its
// own std::mt19937_64 whose seed is splitmix64-mixed from (seed, kind,
// index). Streams never depend on how many other entities exist, so growing
// the driver count leaves tasks and existing drivers untouched. Uniform
// doubles take the top 53 bits of one draw, which keeps results identical
// across standard libraries.

#pragma once

#include <cstdint>
#include <random>

namespace crowdcomp {

std::uint64_t splitmix64(std::uint64_t x);

enum class StreamKind : std::uint64_t {
  kTask = 1,
  kDriver = 2,
  kPair = 3,
  kDecision = 4,
};

std::uint64_t stream_seed(std::uint64_t seed, StreamKind kind, std::uint64_t index);

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamKind kind, std::uint64_t index);
  explicit RandomStream(std::uint64_t raw_seed) : engine_(raw_seed) {}

  // [0, 1)
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace crowdcomp
