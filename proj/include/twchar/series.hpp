#pragma once

#include "twchar/localfield.hpp"
#include "twchar/rational.hpp"
#include "twchar/volumes.hpp"

#include <cstdint>
#include <string>

namespace twchar {

// entries[n] = C * sign^n * q^-n for n0 <= n <= n_max, or all zero from n0 on.
struct TailModel {
  int n0 = 0;
  Rational C = 0;
  int sign = 1;
  bool tail_zero = false;

  friend bool operator==(const TailModel&, const TailModel&) = default;
};

// coeff * q^(half_exponent / 2)
class QPowerValue {
 public:
  QPowerValue() = default;
  QPowerValue(Rational coeff, int half_exponent, std::uint32_t q);

  const Rational& coeff() const noexcept { return coeff_; }
  int half_exponent() const noexcept { return half_; }
  std::uint32_t q() const noexcept { return q_; }

  bool is_zero() const { return coeff_ == 0; }
  int sign() const { return coeff_ > 0 ? 1 : (coeff_ < 0 ? -1 : 0); }
  bool is_rational() const { return half_ % 2 == 0 || coeff_ == 0; }
  Rational to_rational() const;  // InvalidArgument for odd half_exponent
  // Same value with half_exponent in {0, 1}.
  QPowerValue canonical() const;
  QPowerValue abs() const;

  friend QPowerValue operator*(const QPowerValue& a, const QPowerValue& b);
  friend QPowerValue operator/(const QPowerValue& a, const QPowerValue& b);
  friend QPowerValue operator-(const QPowerValue& a);
  friend bool operator==(const QPowerValue& a, const QPowerValue& b);

 private:
  Rational coeff_ = 0;
  int half_ = 0;
  std::uint32_t q_ = 0;
};

std::string to_string(const QPowerValue& v);

// +1 weights for character sums, (-1)^n for volumes.
inline int series_alternation(const VolumeProfile&) { return -1; }
inline int series_alternation(const CharSumProfile&) { return 1; }

template <class Tag>
TailModel fit_tail(const ShellProfile<Tag>& profile);

// Sum of alternation^n q^{-nm} entries[n] over n, with the fitted tail summed in closed form.
// m = 2(s - 1): s = 0 is m = -2, s = 1 is m = 0.
template <class Tag>
Rational eval_at_m(const ShellProfile<Tag>& profile, const TailModel& tail, int m);

template <class Tag>
Rational eval_at_s0(const ShellProfile<Tag>& profile, const TailModel& tail) {
  return eval_at_m(profile, tail, -2);
}

// Head sum for n <= up_to; m >= 0 only.
template <class Tag>
Rational partial_sum(const ShellProfile<Tag>& profile, int m, int up_to);

// Closed form of the tail beyond index `from` (exclusive of earlier terms) for the series weights.
Rational tail_sum(const TailModel& tail, int alternation, std::uint32_t q, int m, int from);

// Unramified Y: (1 + q^{-2(s+1)}) / (1 + q^{1-2s}).  Ramified Y: chi_Y(-1) q^{-3/2}.
QPowerValue normalization_constant(const CharDescriptor& y, std::uint32_t q, int s = 0);
// The unramified constant rebuilt from the shells of |x| on {|x| <= 1}.
Rational normalization_from_shells(const PrimeContext& ctx, int n_max, int s, KernelKind kernel = KernelKind::Auto);

// 1 + q^-1 - q^-2s - q^-(2s+1)
Rational anisotropic_value(std::uint32_t q, int s);
// The same from the four pivot subdomains of an enumerated anisotropic form, chi_Y unramified.
Rational anisotropic_value_from_shells(const ShellHistogram& h, int s);

}  // namespace twchar
