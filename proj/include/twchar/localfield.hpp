#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace twchar {

// p^k as a signed 64-bit integer; throws InvalidArgument past 2^31.
std::int64_t prime_power(std::uint32_t p, int k);

// An integer mod p^N.  Operations on mixed precisions reduce to the smaller one.
class ResidueElement {
 public:
  ResidueElement(std::uint32_t p, int precision, std::int64_t value);

  std::uint32_t prime() const noexcept { return p_; }
  int precision() const noexcept { return precision_; }
  std::int64_t value() const noexcept { return value_; }
  std::int64_t modulus() const noexcept { return modulus_; }

  bool is_zero() const noexcept { return value_ == 0; }
  bool is_unit() const noexcept { return value_ % p_ != 0; }

  // Lowering only: raising precision would invent digits.
  ResidueElement reduced(int precision) const;
  ResidueElement inverse() const;
  // x / pi^k at precision N - k; requires val(x) >= k or x == 0.
  ResidueElement shifted_down(int k) const;

  ResidueElement operator-() const;
  ResidueElement& operator+=(const ResidueElement& o);
  ResidueElement& operator-=(const ResidueElement& o);
  ResidueElement& operator*=(const ResidueElement& o);
  friend ResidueElement operator+(ResidueElement a, const ResidueElement& b) { return a += b; }
  friend ResidueElement operator-(ResidueElement a, const ResidueElement& b) { return a -= b; }
  friend ResidueElement operator*(ResidueElement a, const ResidueElement& b) { return a *= b; }

  // Equality at the smaller of the two precisions.
  friend bool operator==(const ResidueElement& a, const ResidueElement& b);

  ResidueElement with_value(std::int64_t v) const { return ResidueElement(p_, precision_, v); }

 private:
  void match(const ResidueElement& o);

  std::uint32_t p_;
  int precision_;
  std::int64_t modulus_;
  std::int64_t value_;
};

int valuation(const ResidueElement& x);
ResidueElement unit_part(const ResidueElement& x);

std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t m);

// Euler's criterion on e mod p.
int legendre(std::int64_t e, std::uint32_t p);
int legendre(const ResidueElement& e);

std::int64_t find_nonsquare_unit(std::uint32_t p);
std::int64_t find_d(std::uint32_t p);

// Square root of a unit square mod p^N by Hensel lifting; nullopt if not a square.
std::optional<ResidueElement> unit_sqrt(const ResidueElement& x);

class PrimeContext {
 public:
  explicit PrimeContext(std::uint32_t p);

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t q() const noexcept { return p_; }
  std::int64_t u() const noexcept { return u_; }
  std::optional<std::int64_t> d() const noexcept { return d_; }
  bool minus_one_is_square() const noexcept { return !d_.has_value(); }

  ResidueElement elem(int precision, std::int64_t v) const { return ResidueElement(p_, precision, v); }

 private:
  std::uint32_t p_;
  std::int64_t u_;
  std::optional<std::int64_t> d_;
};

// Classes of F^x / F^x2 for p odd: {1, u, pi, u pi}.
class SquareClass {
 public:
  enum class Tag { One, U, Pi, UPi };

  constexpr SquareClass() = default;
  constexpr SquareClass(bool nonsquare_unit, bool odd_valuation)
      : nonsquare_(nonsquare_unit), odd_(odd_valuation) {}
  constexpr explicit SquareClass(Tag t)
      : nonsquare_(t == Tag::U || t == Tag::UPi), odd_(t == Tag::Pi || t == Tag::UPi) {}

  constexpr bool nonsquare_unit() const noexcept { return nonsquare_; }
  constexpr bool odd_valuation() const noexcept { return odd_; }
  constexpr Tag tag() const noexcept {
    return odd_ ? (nonsquare_ ? Tag::UPi : Tag::Pi) : (nonsquare_ ? Tag::U : Tag::One);
  }
  constexpr bool is_one() const noexcept { return !nonsquare_ && !odd_; }

  friend constexpr SquareClass operator*(SquareClass a, SquareClass b) {
    return SquareClass(a.nonsquare_ != b.nonsquare_, a.odd_ != b.odd_);
  }
  friend constexpr bool operator==(SquareClass a, SquareClass b) = default;

  // Representative u^i pi^j mod p^N.
  ResidueElement representative(const PrimeContext& ctx, int precision) const;

  static SquareClass parse(std::string_view s);

 private:
  bool nonsquare_ = false;
  bool odd_ = false;
};

std::string to_string(SquareClass c);

SquareClass square_class(const ResidueElement& x);
SquareClass square_class(int val, std::int64_t unit, std::uint32_t p);

// Hilbert symbol (pi^a e, pi^b f) for p odd, e and f units.
int hilbert_symbol(int a, std::int64_t e, int b, std::int64_t f, std::uint32_t p);

// Y = F(sqrt D), D a nontrivial square class.
class CharDescriptor {
 public:
  explicit CharDescriptor(SquareClass d_class);

  SquareClass d_class() const noexcept { return d_; }
  bool ramified() const noexcept { return d_.odd_valuation(); }

  // chi_Y(pi), pinned by chi_Y(-D) = 1.
  int chi_uniformizer(std::uint32_t p) const;
  int chi_unit(std::int64_t e, std::uint32_t p) const;
  int chi(int val, std::int64_t unit, std::uint32_t p) const;

  static CharDescriptor parse(std::string_view s);

  friend bool operator==(const CharDescriptor& a, const CharDescriptor& b) = default;

 private:
  SquareClass d_;
};

std::string to_string(const CharDescriptor& y);

int chi_eval(const CharDescriptor& y, const ResidueElement& x);

}  // namespace twchar
