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

// Data-parallel inner loops with a scalar reference implementation and SIMD
// variants picked at runtime.
//
// Every variant produces bit-identical results to the scalar reference: the
// scalar code fixes the order of floating-point operations (including the
// lane-wise accumulation order of reductions) and the SIMD code reproduces
// it. Solver output therefore never depends on the host CPU.
//
// Selection order: CROWDCOMP_ISA environment variable ("scalar", "avx2"),
// otherwise the widest variant the CPU supports.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace crowdcomp::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);

// Inputs/outputs of the linear closed-form compensation over n pairs.
// clamp codes: 0 none, 1 lower, 2 upper.
struct LinearCompensationArgs {
  const double* alpha;
  const double* beta;
  const double* c_prime;
  const double* cap;
  double floor;
  double* compensation;
  double* probability;
  double* weight;
  std::int8_t* clamp;
  std::size_t n;
};

// One column scan of the shortest-augmenting-path assignment step. For every
// column j with used[j] == 0:
//
//   cur = (row[j] - row_potential) - col_potential[j]
//   if cur < min_slack[j]: min_slack[j] = cur, way[j] = from_column
//
// and returns the unused column with the smallest min_slack (lowest index on
// ties). Returns index == n when every column is used.
struct AssignmentScanArgs {
  const double* row;
  double row_potential;
  const double* col_potential;
  const std::uint8_t* used;
  double* min_slack;
  std::int32_t* way;
  std::int32_t from_column;
  std::size_t n;
};

struct ScanResult {
  std::size_t index;
  double value;
};

struct KernelTable {
  Isa isa;
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // Four interleaved partial sums over blocks of four, combined as
  // (s0 + s2) + (s1 + s3), then the tail added in order.
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*linear_compensation)(const LinearCompensationArgs& args);
  ScanResult (*assignment_scan)(const AssignmentScanArgs& args);
};

bool supported(Isa isa);
std::vector<Isa> available();

// Table for a specific ISA; throws std::invalid_argument if unsupported.
const KernelTable& table(Isa isa);

// Currently selected table.
const KernelTable& active();

// Overrides the selection (process-wide). Throws if unsupported.
void select(Isa isa);

}  // namespace crowdcomp::kernels
