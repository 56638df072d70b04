#include "shell_kernel.hpp"

namespace twchar::detail {

void accumulate_row_scalar(const RowView& row, std::int64_t base, std::int64_t linear, std::uint64_t* hist) {
  const std::int64_t m = row.modulus;
  for (std::size_t s = 0; s < row.count; ++s) {
    std::int64_t r = (base + linear * row.w[s] + row.sq[s]) % m;
    ++hist[row.bucket[r]];
  }
}

}  // namespace twchar::detail
