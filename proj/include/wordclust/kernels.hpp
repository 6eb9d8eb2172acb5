#pragma once

// Inner loops of the clustering objective. Each kernel has a scalar
// reference and, on x86-64, an AVX2 variant picked at runtime. The scalar
// code accumulates in four strided lanes exactly as the vector code does, so
// the variants agree bit for bit.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace wordclust::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelSet {
  Isa isa;
  const char* name;

  // sum_i table[counts[i]]
  double (*xlogx_sum)(const std::int32_t* counts, std::size_t n, const double* table);

  // Change of sum_v table[row[v]] over both rows when a noun with sparse row
  // (verbs[i], counts[i]) moves from `from_row` to `to_row`:
  //   sum_i (table[from[v]-c] - table[from[v]]) + (table[to[v]+c] - table[to[v]])
  double (*move_delta)(const std::int32_t* verbs, const std::int32_t* counts, std::size_t nnz,
                       const std::int32_t* from_row, const std::int32_t* to_row,
                       const double* table);
};

const KernelSet& scalar();
// nullptr when not compiled in or the CPU lacks AVX2.
const KernelSet* avx2();
// Best available set; WORDCLUST_ISA=scalar in the environment forces scalar.
const KernelSet& active();

// table[c] = c * log2(c), table[0] = 0.
class XLogXTable {
 public:
  static constexpr std::int64_t kMaxEntries = std::int64_t{1} << 22;

  // Covers counts in [0, max_count]; max_count is clamped to kMaxEntries - 1.
  explicit XLogXTable(std::int64_t max_count);

  bool covers(std::int64_t count) const { return count >= 0 && count < static_cast<std::int64_t>(values_.size()); }
  const double* data() const { return values_.data(); }
  double operator[](std::size_t c) const { return values_[c]; }

 private:
  std::vector<double> values_;
};

double xlogx(double c);

}  // namespace wordclust::kernels
