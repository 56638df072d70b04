#include "twchar/kernels.hpp"

#include "shell_kernel.hpp"
#include "twchar/error.hpp"

namespace twchar {

bool avx2_supported() noexcept {
#if defined(TWCHAR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

KernelKind resolve_kernel(KernelKind requested) {
  switch (requested) {
    case KernelKind::Auto: return avx2_supported() ? KernelKind::Avx2 : KernelKind::Scalar;
    case KernelKind::Scalar: return KernelKind::Scalar;
    case KernelKind::Avx2:
      if (!avx2_supported()) throw Error(ErrorCode::InvalidArgument, "AVX2 kernel not available on this machine");
      return KernelKind::Avx2;
  }
  return KernelKind::Scalar;
}

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::Auto: return "auto";
    case KernelKind::Scalar: return "scalar";
    case KernelKind::Avx2: return "avx2";
  }
  return "?";
}

KernelKind parse_kernel(std::string_view s) {
  if (s == "auto") return KernelKind::Auto;
  if (s == "scalar") return KernelKind::Scalar;
  if (s == "avx2") return KernelKind::Avx2;
  throw Error(ErrorCode::InvalidArgument, "unknown kernel '" + std::string(s) + "'");
}

RowKernel::RowKernel(std::int64_t modulus, std::int64_t quad, std::vector<std::int64_t> inner_values,
                     std::vector<std::uint8_t> bucket_of_residue, int bucket_count)
    : modulus_(modulus), bucket_count_(bucket_count), bucket8_(std::move(bucket_of_residue)) {
  if (static_cast<std::int64_t>(bucket8_.size()) != modulus)
    throw Error(ErrorCode::InvalidArgument, "bucket table must cover every residue");
  auto md = [m = modulus](std::int64_t v) { v %= m; return v < 0 ? v + m : v; };
  quad = md(quad);
  w_.reserve(inner_values.size());
  sq_.reserve(inner_values.size());
  for (std::int64_t w : inner_values) {
    w = md(w);
    w_.push_back(static_cast<std::int32_t>(w));
    sq_.push_back(static_cast<std::int32_t>(md(quad * md(w * w))));
  }
  bucket32_.assign(bucket8_.begin(), bucket8_.end());
}

void RowKernel::accumulate(std::int64_t base, std::int64_t linear, std::span<std::uint64_t> hist,
                           KernelKind kind) const {
  if (static_cast<int>(hist.size()) < bucket_count_) throw Error(ErrorCode::InvalidArgument, "histogram too small");
  auto md = [m = modulus_](std::int64_t v) { v %= m; return v < 0 ? v + m : v; };
  base = md(base);
  linear = md(linear);
  detail::RowView row{w_.data(), sq_.data(), bucket32_.data(), w_.size(), static_cast<std::int32_t>(modulus_),
                      bucket_count_};
#if defined(TWCHAR_HAVE_AVX2)
  if (kind == KernelKind::Avx2 && simd_eligible()) {
    detail::accumulate_row_avx2(row, static_cast<std::int32_t>(base), static_cast<std::int32_t>(linear), hist.data());
    return;
  }
#else
  (void)kind;
#endif
  detail::accumulate_row_scalar(row, base, linear, hist.data());
}

}  // namespace twchar
