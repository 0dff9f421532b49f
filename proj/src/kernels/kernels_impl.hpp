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

#include "crowdcomp/kernels.hpp"

namespace crowdcomp::kernels {

namespace scalar {
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void linear_compensation(const LinearCompensationArgs& args);
ScanResult assignment_scan(const AssignmentScanArgs& args);
}  // namespace scalar

#if defined(CROWDCOMP_HAVE_AVX2)
namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void linear_compensation(const LinearCompensationArgs& args);
ScanResult assignment_scan(const AssignmentScanArgs& args);
}  // namespace avx2
#endif

}  // namespace crowdcomp::kernels
