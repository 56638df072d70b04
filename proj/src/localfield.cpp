#include "twchar/localfield.hpp"

#include "twchar/error.hpp"

#include <algorithm>
#include <limits>
#include <tuple>
#include <utility>

namespace twchar {

namespace {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t k = 2; static_cast<std::uint64_t>(k) * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

std::int64_t reduce(std::int64_t v, std::int64_t m) {
  v %= m;
  return v < 0 ? v + m : v;
}

}  // namespace

std::int64_t prime_power(std::uint32_t p, int k) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "negative exponent");
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) {
    r *= p;
    if (r > std::numeric_limits<std::int32_t>::max())
      throw Error(ErrorCode::InvalidArgument, "p^N exceeds 2^31");
  }
  return r;
}

ResidueElement::ResidueElement(std::uint32_t p, int precision, std::int64_t value)
    : p_(p), precision_(precision), modulus_(prime_power(p, precision)) {
  if (p < 3 || p % 2 == 0) throw Error(ErrorCode::InvalidArgument, "p must be an odd prime");
  if (precision < 1) throw Error(ErrorCode::InvalidArgument, "precision must be >= 1");
  value_ = reduce(value, modulus_);
}

void ResidueElement::match(const ResidueElement& o) {
  if (o.p_ != p_) throw Error(ErrorCode::InvalidArgument, "mixed primes");
  if (o.precision_ < precision_) *this = reduced(o.precision_);
}

ResidueElement ResidueElement::reduced(int precision) const {
  if (precision > precision_)
    throw Error(ErrorCode::InsufficientPrecision, "cannot raise precision");
  return ResidueElement(p_, precision, value_);
}

ResidueElement ResidueElement::inverse() const {
  if (!is_unit()) throw Error(ErrorCode::NotAUnit, std::to_string(value_) + " is not a unit");
  // Extended Euclid on (value, modulus).
  std::int64_t a = value_, m = modulus_, x0 = 1, x1 = 0;
  while (m != 0) {
    std::int64_t t = a / m;
    std::tie(a, m) = std::pair{m, a - t * m};
    std::tie(x0, x1) = std::pair{x1, x0 - t * x1};
  }
  return ResidueElement(p_, precision_, x0);
}

ResidueElement ResidueElement::shifted_down(int k) const {
  if (k == 0) return *this;
  if (k >= precision_) throw Error(ErrorCode::PrecisionTooLow, "shift exhausts precision");
  std::int64_t pk = prime_power(p_, k);
  if (value_ % pk != 0) throw Error(ErrorCode::InvalidArgument, "not divisible by pi^k");
  return ResidueElement(p_, precision_ - k, value_ / pk);
}

ResidueElement ResidueElement::operator-() const { return ResidueElement(p_, precision_, -value_); }

ResidueElement& ResidueElement::operator+=(const ResidueElement& o) {
  match(o);
  value_ = reduce(value_ + o.value_, modulus_);
  return *this;
}

ResidueElement& ResidueElement::operator-=(const ResidueElement& o) {
  match(o);
  value_ = reduce(value_ - o.value_, modulus_);
  return *this;
}

ResidueElement& ResidueElement::operator*=(const ResidueElement& o) {
  match(o);
  value_ = reduce((value_ * (o.value_ % modulus_)) % modulus_, modulus_);
  return *this;
}

bool operator==(const ResidueElement& a, const ResidueElement& b) {
  if (a.p_ != b.p_) return false;
  int n = std::min(a.precision_, b.precision_);
  std::int64_t m = prime_power(a.p_, n);
  return a.value_ % m == b.value_ % m;
}

int valuation(const ResidueElement& x) {
  if (x.is_zero())
    throw Error(ErrorCode::ZeroAtPrecision, "zero mod p^" + std::to_string(x.precision()));
  int k = 0;
  for (std::int64_t v = x.value(); v % x.prime() == 0; v /= x.prime()) ++k;
  return k;
}

ResidueElement unit_part(const ResidueElement& x) { return x.shifted_down(valuation(x)); }

std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t m) {
  std::int64_t r = 1 % m;
  base = reduce(base, m);
  while (exp > 0) {
    if (exp & 1) r = r * base % m;
    base = base * base % m;
    exp >>= 1;
  }
  return r;
}

int legendre(std::int64_t e, std::uint32_t p) {
  std::int64_t r = reduce(e, p);
  if (r == 0) throw Error(ErrorCode::NotAUnit, std::to_string(e) + " is divisible by p");
  return mod_pow(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

int legendre(const ResidueElement& e) { return legendre(e.value(), e.prime()); }

std::int64_t find_nonsquare_unit(std::uint32_t p) {
  for (std::int64_t a = 2;; ++a)
    if (legendre(a, p) == -1) return a;
}

std::int64_t find_d(std::uint32_t p) {
  if (legendre(-1, p) == 1)
    throw Error(ErrorCode::MinusOneIsSquare, "-1 is a square mod " + std::to_string(p));
  for (std::int64_t d = 1;; ++d)
    if (legendre(d * d + 1, p) == -1) return d;
}

std::optional<ResidueElement> unit_sqrt(const ResidueElement& x) {
  if (!x.is_unit() || legendre(x) != 1) return std::nullopt;
  const std::uint32_t p = x.prime();
  std::int64_t r0 = 1;
  while ((r0 * r0 - x.value()) % static_cast<std::int64_t>(p) != 0) ++r0;
  ResidueElement r = x.with_value(r0);
  const ResidueElement two = x.with_value(2);
  for (int i = 0; i < x.precision(); ++i) r = r - (r * r - x) * (two * r).inverse();
  return r;
}

PrimeContext::PrimeContext(std::uint32_t p) : p_(p) {
  if (p % 2 == 0 || !is_prime(p)) throw Error(ErrorCode::InvalidArgument, "p must be an odd prime");
  if (p > 46337) throw Error(ErrorCode::InvalidArgument, "p too large");
  u_ = find_nonsquare_unit(p);
  if (legendre(-1, p) == -1) d_ = find_d(p);
}

ResidueElement SquareClass::representative(const PrimeContext& ctx, int precision) const {
  std::int64_t v = (nonsquare_ ? ctx.u() : 1) * (odd_ ? ctx.p() : 1);
  return ctx.elem(precision, v);
}

SquareClass SquareClass::parse(std::string_view s) {
  if (s == "1") return SquareClass(Tag::One);
  if (s == "u") return SquareClass(Tag::U);
  if (s == "pi") return SquareClass(Tag::Pi);
  if (s == "upi") return SquareClass(Tag::UPi);
  throw Error(ErrorCode::InvalidArgument, "unknown square class '" + std::string(s) + "'");
}

std::string to_string(SquareClass c) {
  switch (c.tag()) {
    case SquareClass::Tag::One: return "1";
    case SquareClass::Tag::U: return "u";
    case SquareClass::Tag::Pi: return "pi";
    case SquareClass::Tag::UPi: return "upi";
  }
  return "?";
}

SquareClass square_class(int val, std::int64_t unit, std::uint32_t p) {
  return SquareClass(legendre(unit, p) == -1, val % 2 != 0);
}

SquareClass square_class(const ResidueElement& x) {
  int k = valuation(x);
  return square_class(k, unit_part(x).value(), x.prime());
}

int hilbert_symbol(int a, std::int64_t e, int b, std::int64_t f, std::uint32_t p) {
  int s = 1;
  if ((a & 1) && (b & 1) && ((p - 1) / 2) % 2 == 1) s = -s;
  if (b & 1) s *= legendre(e, p);
  if (a & 1) s *= legendre(f, p);
  return s;
}

CharDescriptor::CharDescriptor(SquareClass d_class) : d_(d_class) {
  if (d_class.is_one()) throw Error(ErrorCode::InvalidArgument, "Y = F(sqrt 1) is not a field");
}

int CharDescriptor::chi_uniformizer(std::uint32_t p) const {
  if (!ramified()) return -1;
  std::int64_t e = d_.nonsquare_unit() ? find_nonsquare_unit(p) : 1;
  return legendre(-e, p);
}

int CharDescriptor::chi_unit(std::int64_t e, std::uint32_t p) const {
  return ramified() ? legendre(e, p) : 1;
}

int CharDescriptor::chi(int val, std::int64_t unit, std::uint32_t p) const {
  int s = chi_unit(unit, p);
  return (val % 2 != 0) ? s * chi_uniformizer(p) : s;
}

CharDescriptor CharDescriptor::parse(std::string_view s) { return CharDescriptor(SquareClass::parse(s)); }

std::string to_string(const CharDescriptor& y) { return to_string(y.d_class()); }

int chi_eval(const CharDescriptor& y, const ResidueElement& x) {
  if (x.is_zero())
    throw Error(ErrorCode::InsufficientPrecision, "chi_Y undefined: x is zero at working precision");
  int k = valuation(x);
  return y.chi(k, unit_part(x).value(), x.prime());
}

}  // namespace twchar
