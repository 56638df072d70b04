#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace twchar {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// q^k for any integer k.
Rational qpow(std::uint32_t q, int k);

std::string numerator_string(const Rational& r);
std::string denominator_string(const Rational& r);
std::string to_string(const Rational& r);

// Inverse of numerator_string/denominator_string.
Rational rational_from_strings(const std::string& num, const std::string& den);

}  // namespace twchar
