#include "kernels_impl.hpp"

namespace wordclust::kernels::detail {

double xlogx_sum_scalar(const std::int32_t* counts, std::size_t n, const double* table) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lane[0] += table[counts[i]];
    lane[1] += table[counts[i + 1]];
    lane[2] += table[counts[i + 2]];
    lane[3] += table[counts[i + 3]];
  }
  for (; i < n; ++i) lane[i & 3] += table[counts[i]];
  return reduce_lanes(lane);
}

double move_delta_scalar(const std::int32_t* verbs, const std::int32_t* counts, std::size_t nnz,
                         const std::int32_t* from_row, const std::int32_t* to_row,
                         const double* table) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < nnz; ++i) {
    std::int32_t from = from_row[verbs[i]];
    std::int32_t to = to_row[verbs[i]];
    double leave = table[from - counts[i]] - table[from];
    double enter = table[to + counts[i]] - table[to];
    lane[i & 3] += leave + enter;
  }
  return reduce_lanes(lane);
}

}  // namespace wordclust::kernels::detail
