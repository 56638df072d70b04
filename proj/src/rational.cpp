#include "twchar/rational.hpp"

#include "twchar/error.hpp"

namespace twchar {

Rational qpow(std::uint32_t q, int k) {
  BigInt base = q;
  BigInt r = boost::multiprecision::pow(base, static_cast<unsigned>(k < 0 ? -k : k));
  if (k >= 0) return Rational(r);
  return Rational(BigInt(1), r);
}

std::string numerator_string(const Rational& r) { return boost::multiprecision::numerator(r).str(); }

std::string denominator_string(const Rational& r) { return boost::multiprecision::denominator(r).str(); }

std::string to_string(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) return numerator_string(r);
  return numerator_string(r) + "/" + denominator_string(r);
}

Rational rational_from_strings(const std::string& num, const std::string& den) {
  try {
    BigInt n(num), d(den);
    if (d == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
    return Rational(n, d);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e)) throw;
    throw Error(ErrorCode::InvalidArgument, "bad integer string '" + num + "/" + den + "'");
  }
}

}  // namespace twchar
