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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels/kernels_impl.hpp"

namespace crowdcomp::kernels {
namespace {

constexpr KernelTable kScalarTable{Isa::kScalar, &scalar::axpy, &scalar::dot,
                                   &scalar::linear_compensation,
                                   &scalar::assignment_scan};

#if defined(CROWDCOMP_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Isa::kAvx2, &avx2::axpy, &avx2::dot,
                                 &avx2::linear_compensation,
                                 &avx2::assignment_scan};
#endif

const KernelTable* initial_table() {
  if (const char* env = std::getenv("CROWDCOMP_ISA")) {
    const std::string name(env);
    if (name == "scalar") return &kScalarTable;
    if (name == "avx2" && supported(Isa::kAvx2)) return &table(Isa::kAvx2);
  }
  if (supported(Isa::kAvx2)) return &table(Isa::kAvx2);
  return &kScalarTable;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> ptr{initial_table()};
  return ptr;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(CROWDCOMP_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> available() {
  std::vector<Isa> out{Isa::kScalar};
  if (supported(Isa::kAvx2)) out.push_back(Isa::kAvx2);
  return out;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) {
    throw std::invalid_argument("kernel variant not supported on this CPU: " +
                                std::string(to_string(isa)));
  }
#if defined(CROWDCOMP_HAVE_AVX2)
  if (isa == Isa::kAvx2) return kAvx2Table;
#endif
  return kScalarTable;
}

const KernelTable& active() {
  return *current().load(std::memory_order_acquire);
}

void select(Isa isa) { current().store(&table(isa), std::memory_order_release); }

}  // namespace crowdcomp::kernels
