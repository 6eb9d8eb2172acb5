#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"
#include "wordclust/kernels.hpp"

namespace wordclust::kernels {

namespace {

const KernelSet kScalar{Isa::Scalar, "scalar", &detail::xlogx_sum_scalar, &detail::move_delta_scalar};

#if defined(WORDCLUST_HAVE_AVX2)
const KernelSet kAvx2{Isa::Avx2, "avx2", &detail::xlogx_sum_avx2, &detail::move_delta_avx2};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
}
#endif

const KernelSet& pick() {
  if (const char* forced = std::getenv("WORDCLUST_ISA"); forced && std::string_view(forced) == "scalar")
    return kScalar;
  if (const KernelSet* vec = avx2()) return *vec;
  return kScalar;
}

}  // namespace

const KernelSet& scalar() { return kScalar; }

const KernelSet* avx2() {
#if defined(WORDCLUST_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet& active() {
  static const KernelSet& chosen = pick();
  return chosen;
}

double xlogx(double c) { return c > 0.0 ? c * std::log2(c) : 0.0; }

XLogXTable::XLogXTable(std::int64_t max_count) {
  std::int64_t last = std::clamp<std::int64_t>(max_count, 0, kMaxEntries - 1);
  values_.resize(static_cast<std::size_t>(last) + 1);
  for (std::size_t c = 0; c < values_.size(); ++c) values_[c] = xlogx(static_cast<double>(c));
}

}  // namespace wordclust::kernels
