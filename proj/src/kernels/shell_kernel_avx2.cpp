#include "shell_kernel.hpp"

#include <immintrin.h>

#include <array>

namespace twchar::detail {

namespace {

// x in [0, 2^31) to x mod m via a float quotient estimate; the estimate is off by at most one
// for m <= 2^22, which the two corrections absorb.
inline __m256i reduce(__m256i x, __m256i vm, __m256 inv_m) {
  __m256i q = _mm256_cvttps_epi32(_mm256_mul_ps(_mm256_cvtepi32_ps(x), inv_m));
  __m256i r = _mm256_sub_epi32(x, _mm256_mullo_epi32(q, vm));
  r = _mm256_add_epi32(r, _mm256_and_si256(vm, _mm256_cmpgt_epi32(_mm256_setzero_si256(), r)));
  r = _mm256_sub_epi32(r, _mm256_andnot_si256(_mm256_cmpgt_epi32(vm, r), vm));
  return r;
}

inline __m256i sub_if_ge(__m256i r, __m256i vm) {
  return _mm256_sub_epi32(r, _mm256_andnot_si256(_mm256_cmpgt_epi32(vm, r), vm));
}

}  // namespace

void accumulate_row_avx2(const RowView& row, std::int32_t base, std::int32_t linear, std::uint64_t* hist) {
  constexpr int kMaxBuckets = 32;
  const int nb = row.bucket_count;
  if (nb > kMaxBuckets) {
    accumulate_row_scalar(row, base, linear, hist);
    return;
  }
  const __m256i vm = _mm256_set1_epi32(row.modulus);
  const __m256 inv_m = _mm256_set1_ps(1.0f / static_cast<float>(row.modulus));
  const __m256i vbase = _mm256_set1_epi32(base);
  const __m256i vlin = _mm256_set1_epi32(linear);

  __m256i acc[kMaxBuckets];
  for (int b = 0; b < nb; ++b) acc[b] = _mm256_setzero_si256();
  __m256i ids[kMaxBuckets];
  for (int b = 0; b < nb; ++b) ids[b] = _mm256_set1_epi32(b);

  std::size_t s = 0;
  const std::size_t vec_end = row.count & ~std::size_t{7};
  // Lane counters stay far below 2^31 for any row length we enumerate.
  for (; s < vec_end; s += 8) {
    __m256i w = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row.w + s));
    __m256i sq = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row.sq + s));
    __m256i r = reduce(_mm256_mullo_epi32(vlin, w), vm, inv_m);
    r = _mm256_add_epi32(r, _mm256_add_epi32(vbase, sq));
    r = sub_if_ge(r, vm);
    r = sub_if_ge(r, vm);
    __m256i bucket = _mm256_i32gather_epi32(row.bucket, r, 4);
    for (int b = 0; b < nb; ++b) acc[b] = _mm256_sub_epi32(acc[b], _mm256_cmpeq_epi32(bucket, ids[b]));
  }
  for (int b = 0; b < nb; ++b) {
    alignas(32) std::array<std::int32_t, 8> lanes;
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes.data()), acc[b]);
    std::uint64_t total = 0;
    for (auto v : lanes) total += static_cast<std::uint32_t>(v);
    hist[b] += total;
  }
  const std::int64_t m = row.modulus;
  for (; s < row.count; ++s) {
    std::int64_t r = (base + static_cast<std::int64_t>(linear) * row.w[s] + row.sq[s]) % m;
    ++hist[row.bucket[r]];
  }
}

}  // namespace twchar::detail
