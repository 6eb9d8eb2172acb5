#pragma once

#include <cstddef>
#include <cstdint>

namespace wordclust::kernels::detail {

// Fixed reduction order shared by every variant. Internal linkage keeps the
// -mavx2 translation unit from donating its copy to scalar callers.
static inline double reduce_lanes(const double lane[4]) { return (lane[0] + lane[1]) + (lane[2] + lane[3]); }

double xlogx_sum_scalar(const std::int32_t* counts, std::size_t n, const double* table);
double move_delta_scalar(const std::int32_t* verbs, const std::int32_t* counts, std::size_t nnz,
                         const std::int32_t* from_row, const std::int32_t* to_row,
                         const double* table);

#if defined(WORDCLUST_HAVE_AVX2)
double xlogx_sum_avx2(const std::int32_t* counts, std::size_t n, const double* table);
double move_delta_avx2(const std::int32_t* verbs, const std::int32_t* counts, std::size_t nnz,
                       const std::int32_t* from_row, const std::int32_t* to_row,
                       const double* table);
#endif

}  // namespace wordclust::kernels::detail
