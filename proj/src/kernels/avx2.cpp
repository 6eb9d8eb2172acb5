// Built with -mavx2. Only called after the dispatcher has confirmed AVX2.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace wordclust::kernels::detail {

double xlogx_sum_avx2(const std::int32_t* counts, std::size_t n, const double* table) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(counts + i));
    acc = _mm256_add_pd(acc, _mm256_i32gather_pd(table, idx, 8));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (; i < n; ++i) lane[i & 3] += table[counts[i]];
  return reduce_lanes(lane);
}

double move_delta_avx2(const std::int32_t* verbs, const std::int32_t* counts, std::size_t nnz,
                       const std::int32_t* from_row, const std::int32_t* to_row,
                       const double* table) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= nnz; i += 4) {
    __m128i v = _mm_loadu_si128(reinterpret_cast<const __m128i*>(verbs + i));
    __m128i c = _mm_loadu_si128(reinterpret_cast<const __m128i*>(counts + i));
    __m128i from = _mm_i32gather_epi32(from_row, v, 4);
    __m128i to = _mm_i32gather_epi32(to_row, v, 4);
    __m256d leave = _mm256_sub_pd(_mm256_i32gather_pd(table, _mm_sub_epi32(from, c), 8),
                                  _mm256_i32gather_pd(table, from, 8));
    __m256d enter = _mm256_sub_pd(_mm256_i32gather_pd(table, _mm_add_epi32(to, c), 8),
                                  _mm256_i32gather_pd(table, to, 8));
    acc = _mm256_add_pd(acc, _mm256_add_pd(leave, enter));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (; i < nnz; ++i) {
    std::int32_t from = from_row[verbs[i]];
    std::int32_t to = to_row[verbs[i]];
    double leave = table[from - counts[i]] - table[from];
    double enter = table[to + counts[i]] - table[to];
    lane[i & 3] += leave + enter;
  }
  return reduce_lanes(lane);
}

}  // namespace wordclust::kernels::detail
