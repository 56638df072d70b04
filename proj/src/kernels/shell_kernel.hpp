#pragma once

#include <cstddef>
#include <cstdint>

namespace twchar::detail {

struct RowView {
  const std::int32_t* w;
  const std::int32_t* sq;
  const std::int32_t* bucket;
  std::size_t count;
  std::int32_t modulus;
  int bucket_count;
};

void accumulate_row_scalar(const RowView& row, std::int64_t base, std::int64_t linear, std::uint64_t* hist);

#if defined(TWCHAR_HAVE_AVX2)
void accumulate_row_avx2(const RowView& row, std::int32_t base, std::int32_t linear, std::uint64_t* hist);
#endif

}  // namespace twchar::detail
