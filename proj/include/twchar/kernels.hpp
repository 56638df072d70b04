#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace twchar {

enum class KernelKind { Auto, Scalar, Avx2 };

bool avx2_supported() noexcept;
// Auto resolves to Avx2 when the CPU has it and the binary was built with it.
KernelKind resolve_kernel(KernelKind requested);
std::string to_string(KernelKind k);
KernelKind parse_kernel(std::string_view s);

// One inner coordinate sweep: for each s, r = (base + linear * w[s] + quad * w[s]^2) mod M,
// then hist[bucket[r]] += 1.
class RowKernel {
 public:
  RowKernel(std::int64_t modulus, std::int64_t quad, std::vector<std::int64_t> inner_values,
            std::vector<std::uint8_t> bucket_of_residue, int bucket_count);

  std::int64_t modulus() const noexcept { return modulus_; }
  int bucket_count() const noexcept { return bucket_count_; }
  std::size_t size() const noexcept { return w_.size(); }
  // AVX2 needs M * M < 2^31.
  bool simd_eligible() const noexcept { return modulus_ <= 46340; }

  void accumulate(std::int64_t base, std::int64_t linear, std::span<std::uint64_t> hist, KernelKind kind) const;

 private:
  std::int64_t modulus_;
  int bucket_count_;
  std::vector<std::int32_t> w_;
  std::vector<std::int32_t> sq_;
  std::vector<std::int32_t> bucket32_;
  std::vector<std::uint8_t> bucket8_;
};

}  // namespace twchar
