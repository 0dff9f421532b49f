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

// Compiled with -mavx2 only; callers reach these through the dispatch table
// after a CPU check. No FMA: results must match the scalar reference.

#include <immintrin.h>

#include <cstring>
#include <limits>

#include "kernels/kernels_impl.hpp"
#include "kernels/linear_closed_form.hpp"

namespace crowdcomp::kernels::avx2 {

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d vx = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  // [s0 + s2, s1 + s3]
  const __m128d pair = _mm_add_pd(_mm256_castpd256_pd128(acc),
                                  _mm256_extractf128_pd(acc, 1));
  double r = _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
  for (; i < n; ++i) r = r + x[i] * y[i];
  return r;
}

void linear_compensation(const LinearCompensationArgs& a) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d floor = _mm256_set1_pd(a.floor);
  std::size_t i = 0;
  for (; i + 4 <= a.n; i += 4) {
    const __m256d alpha = _mm256_loadu_pd(a.alpha + i);
    const __m256d beta = _mm256_loadu_pd(a.beta + i);
    const __m256d cp = _mm256_loadu_pd(a.c_prime + i);
    const __m256d cap = _mm256_loadu_pd(a.cap + i);

    __m256d v = _mm256_sub_pd(_mm256_mul_pd(half, cp),
                              _mm256_div_pd(alpha, _mm256_mul_pd(two, beta)));
    const __m256d low = _mm256_cmp_pd(v, floor, _CMP_LT_OQ);
    v = _mm256_blendv_pd(v, floor, low);
    const __m256d high = _mm256_cmp_pd(v, cap, _CMP_GT_OQ);
    v = _mm256_blendv_pd(v, cap, high);

    const __m256d q = _mm256_add_pd(alpha, _mm256_mul_pd(beta, v));
    __m256d p = _mm256_blendv_pd(one, q, _mm256_cmp_pd(q, one, _CMP_LT_OQ));
    __m256d w = _mm256_add_pd(_mm256_mul_pd(p, v),
                              _mm256_mul_pd(_mm256_sub_pd(one, p), cp));

    const __m256d degenerate = _mm256_cmp_pd(cap, zero, _CMP_NGT_UQ);
    v = _mm256_blendv_pd(v, zero, degenerate);
    p = _mm256_blendv_pd(p, zero, degenerate);
    w = _mm256_blendv_pd(w, cp, degenerate);

    _mm256_storeu_pd(a.compensation + i, v);
    _mm256_storeu_pd(a.probability + i, p);
    _mm256_storeu_pd(a.weight + i, w);

    const int low_bits = _mm256_movemask_pd(low);
    const int high_bits =
        _mm256_movemask_pd(_mm256_or_pd(high, degenerate));
    for (int l = 0; l < 4; ++l) {
      a.clamp[i + l] = (high_bits >> l) & 1 ? 2 : ((low_bits >> l) & 1 ? 1 : 0);
    }
  }
  for (; i < a.n; ++i) {
    linear_compensation_one(a.alpha[i], a.beta[i], a.c_prime[i], a.cap[i],
                            a.floor, a.compensation[i], a.probability[i],
                            a.weight[i], a.clamp[i]);
  }
}

ScanResult assignment_scan(const AssignmentScanArgs& a) {
  const double inf = std::numeric_limits<double>::infinity();
  const __m256d vinf = _mm256_set1_pd(inf);
  const __m256d row_potential = _mm256_set1_pd(a.row_potential);
  const __m256i zero_i = _mm256_setzero_si256();
  __m256d best_val = vinf;
  __m256d best_idx = _mm256_set1_pd(static_cast<double>(a.n));
  __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d four = _mm256_set1_pd(4.0);

  std::size_t j = 0;
  for (; j + 4 <= a.n; j += 4) {
    std::int32_t used4;
    std::memcpy(&used4, a.used + j, sizeof(used4));
    const __m256i used64 = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(used4));
    const __m256d unused =
        _mm256_castsi256_pd(_mm256_cmpeq_epi64(used64, zero_i));

    const __m256d cur =
        _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(a.row + j), row_potential),
                      _mm256_loadu_pd(a.col_potential + j));
    __m256d slack = _mm256_loadu_pd(a.min_slack + j);
    const __m256d improve =
        _mm256_and_pd(_mm256_cmp_pd(cur, slack, _CMP_LT_OQ), unused);
    slack = _mm256_blendv_pd(slack, cur, improve);
    _mm256_storeu_pd(a.min_slack + j, slack);
    const int improved = _mm256_movemask_pd(improve);
    if (improved) {
      for (int l = 0; l < 4; ++l) {
        if ((improved >> l) & 1) a.way[j + l] = a.from_column;
      }
    }

    const __m256d candidate = _mm256_blendv_pd(vinf, slack, unused);
    const __m256d better = _mm256_cmp_pd(candidate, best_val, _CMP_LT_OQ);
    best_val = _mm256_blendv_pd(best_val, candidate, better);
    best_idx = _mm256_blendv_pd(best_idx, idx, better);
    idx = _mm256_add_pd(idx, four);
  }

  alignas(32) double vals[4];
  alignas(32) double idxs[4];
  _mm256_store_pd(vals, best_val);
  _mm256_store_pd(idxs, best_idx);
  ScanResult best{a.n, inf};
  for (int l = 0; l < 4; ++l) {
    const auto lane_idx = static_cast<std::size_t>(idxs[l]);
    if (vals[l] < best.value ||
        (vals[l] == best.value && lane_idx < best.index)) {
      best.value = vals[l];
      best.index = lane_idx;
    }
  }
  if (best.value == inf) best.index = a.n;

  for (; j < a.n; ++j) {
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

}  // namespace crowdcomp::kernels::avx2
