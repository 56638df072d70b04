#include "twchar/series.hpp"

#include "twchar/error.hpp"

namespace twchar {

QPowerValue::QPowerValue(Rational coeff, int half_exponent, std::uint32_t q)
    : coeff_(std::move(coeff)), half_(half_exponent), q_(q) {
  if (coeff_ == 0) half_ = 0;
}

Rational QPowerValue::to_rational() const {
  if (!is_rational()) throw Error(ErrorCode::InvalidArgument, "odd power of sqrt(q) is irrational");
  return coeff_ * qpow(q_, half_ / 2);
}

QPowerValue QPowerValue::canonical() const {
  const int odd = ((half_ % 2) + 2) % 2;
  return QPowerValue(coeff_ * qpow(q_, (half_ - odd) / 2), odd, q_);
}

QPowerValue QPowerValue::abs() const { return QPowerValue(coeff_ < 0 ? Rational(-coeff_) : coeff_, half_, q_); }

QPowerValue operator*(const QPowerValue& a, const QPowerValue& b) {
  if (a.q_ && b.q_ && a.q_ != b.q_) throw Error(ErrorCode::InvalidArgument, "mixed q");
  return QPowerValue(a.coeff_ * b.coeff_, a.half_ + b.half_, a.q_ ? a.q_ : b.q_);
}

QPowerValue operator/(const QPowerValue& a, const QPowerValue& b) {
  if (b.coeff_ == 0) throw Error(ErrorCode::InvalidArgument, "division by zero");
  if (a.q_ && b.q_ && a.q_ != b.q_) throw Error(ErrorCode::InvalidArgument, "mixed q");
  return QPowerValue(a.coeff_ / b.coeff_, a.half_ - b.half_, a.q_ ? a.q_ : b.q_);
}

QPowerValue operator-(const QPowerValue& a) { return QPowerValue(-a.coeff_, a.half_, a.q_); }

bool operator==(const QPowerValue& a, const QPowerValue& b) {
  if (a.coeff_ == 0 || b.coeff_ == 0) return a.coeff_ == b.coeff_;
  const QPowerValue x = a.canonical(), y = b.canonical();
  return x.q_ == y.q_ && x.half_ == y.half_ && x.coeff_ == y.coeff_;
}

std::string to_string(const QPowerValue& v) {
  if (v.half_exponent() == 0) return to_string(v.coeff());
  return to_string(v.coeff()) + "*q^(" + std::to_string(v.half_exponent()) + "/2)";
}

template <class Tag>
TailModel fit_tail(const ShellProfile<Tag>& profile) {
  const auto& e = profile.entries;
  const int last = static_cast<int>(e.size()) - 1;
  const Rational inv_q = Rational(1, profile.q);
  for (int n0 = 0; n0 <= last - 1; ++n0) {
    bool zero = true;
    for (int n = n0; n <= last; ++n) zero = zero && e[n] == 0;
    if (zero) return TailModel{n0, 0, 1, true};
    if (n0 > last - 2 || e[n0] == 0) continue;
    const Rational ratio = e[n0 + 1] / e[n0];
    int sign = 0;
    if (ratio == inv_q) sign = 1;
    if (ratio == -inv_q) sign = -1;
    if (sign == 0) continue;
    bool geometric = true;
    for (int n = n0 + 1; n < last && geometric; ++n) geometric = e[n] != 0 && e[n + 1] / e[n] == ratio;
    if (!geometric) continue;
    // C sign^n0 q^-n0 = e[n0]
    return TailModel{n0, e[n0] * qpow(profile.q, n0) * (n0 % 2 && sign < 0 ? -1 : 1), sign, false};
  }
  throw Error(ErrorCode::NoGeometricTail,
              "no geometric tail with ratio +-1/q through n_max = " + std::to_string(profile.n_max));
}

Rational tail_sum(const TailModel& tail, int alternation, std::uint32_t q, int m, int from) {
  if (tail.tail_zero) return 0;
  // sum_{n >= from} (alternation sign q^{-m-1})^n C
  const Rational rho = Rational(alternation * tail.sign) * qpow(q, -m - 1);
  if (rho == 1) throw Error(ErrorCode::InvalidArgument, "series has a pole at this m");
  Rational rho_from = 1;
  for (int i = 0; i < from; ++i) rho_from *= rho;
  return tail.C * rho_from / (1 - rho);
}

template <class Tag>
Rational eval_at_m(const ShellProfile<Tag>& profile, const TailModel& tail, int m) {
  const int alt = series_alternation(profile);
  Rational head = 0;
  for (int n = 0; n < tail.n0; ++n) head += Rational(n % 2 && alt < 0 ? -1 : 1) * qpow(profile.q, -n * m) * profile.entries[n];
  return head + tail_sum(tail, alt, profile.q, m, tail.n0);
}

template <class Tag>
Rational partial_sum(const ShellProfile<Tag>& profile, int m, int up_to) {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "partial sums are for the convergent regime m >= 0");
  if (up_to > profile.n_max) throw Error(ErrorCode::InvalidArgument, "up_to exceeds n_max");
  const int alt = series_alternation(profile);
  Rational s = 0;
  for (int n = 0; n <= up_to; ++n) s += Rational(n % 2 && alt < 0 ? -1 : 1) * qpow(profile.q, -n * m) * profile.entries[n];
  return s;
}

template TailModel fit_tail(const VolumeProfile&);
template TailModel fit_tail(const CharSumProfile&);
template Rational eval_at_m(const VolumeProfile&, const TailModel&, int);
template Rational eval_at_m(const CharSumProfile&, const TailModel&, int);
template Rational partial_sum(const VolumeProfile&, int, int);
template Rational partial_sum(const CharSumProfile&, int, int);

QPowerValue normalization_constant(const CharDescriptor& y, std::uint32_t q, int s) {
  if (y.ramified()) return QPowerValue(Rational(y.chi_unit(static_cast<std::int64_t>(q) - 1, q), q), -1, q);
  return QPowerValue((1 + qpow(q, -2 * (s + 1))) / (1 + qpow(q, 1 - 2 * s)), 0, q);
}

Rational normalization_from_shells(const PrimeContext& ctx, int n_max, int s, KernelKind kernel) {
  const VolumeProfile shells = coordinate_profile(ctx, n_max, kernel);
  const int m = 2 * (s - 1);
  const Rational integral = eval_at_m(shells, fit_tail(shells), m);
  return (1 + qpow(ctx.q(), -m - 4)) * integral / (1 - Rational(1, ctx.q()));
}

Rational anisotropic_value(std::uint32_t q, int s) {
  return 1 + qpow(q, -1) - qpow(q, -2 * s) - qpow(q, -2 * s - 1);
}

Rational anisotropic_value_from_shells(const ShellHistogram& h, int s) {
  const CharDescriptor y{SquareClass(SquareClass::Tag::U)};
  const auto parts = pivot_subdomain_sums(h, y, 2 * (s - 1));
  return parts[0] + parts[1] + parts[2] + parts[3];
}

}  // namespace twchar
