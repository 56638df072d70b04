#include "doctest.h"

#include "twchar/error.hpp"
#include "twchar/localfield.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace twchar;

namespace {

std::set<std::int64_t> brute_squares(std::int64_t p) {
  std::set<std::int64_t> s;
  for (std::int64_t x = 1; x < p; ++x) s.insert(x * x % p);
  return s;
}

int brute_legendre(std::int64_t e, std::int64_t p) {
  e %= p;
  if (e < 0) e += p;
  return brute_squares(p).count(e) ? 1 : -1;
}

}  // namespace

TEST_CASE("valuation examples") {
  CHECK(valuation(ResidueElement(3, 4, 18)) == 2);
  CHECK(valuation(ResidueElement(5, 3, 7)) == 0);
  CHECK_THROWS_AS(valuation(ResidueElement(3, 2, 0)), Error);
  try {
    valuation(ResidueElement(3, 2, 9));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroAtPrecision);
  }
}

TEST_CASE("legendre agrees with brute force squares") {
  CHECK(legendre(4, 7) == 1);
  CHECK(legendre(3, 7) == -1);
  CHECK(legendre(2, 3) == -1);
  for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u}) {
    for (std::int64_t e = 1; e < static_cast<std::int64_t>(p); ++e) CHECK(legendre(e, p) == brute_legendre(e, p));
    CHECK_THROWS_AS(legendre(static_cast<std::int64_t>(p), p), Error);
  }
}

TEST_CASE("u and d choices") {
  CHECK(find_nonsquare_unit(3) == 2);
  CHECK(find_nonsquare_unit(5) == 2);
  CHECK(find_nonsquare_unit(7) == 3);
  CHECK(find_d(3) == 1);
  CHECK(find_d(7) == 2);
  try {
    find_d(5);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MinusOneIsSquare);
  }
  for (std::uint32_t p : {3u, 7u, 11u, 19u}) {
    PrimeContext ctx(p);
    REQUIRE(ctx.d().has_value());
    std::int64_t d = *ctx.d();
    CHECK(brute_legendre(d * d + 1, p) == -1);
    CHECK(brute_legendre(ctx.u(), p) == -1);
  }
  CHECK(PrimeContext(5).minus_one_is_square());
  CHECK_THROWS_AS(PrimeContext(9), Error);
  CHECK_THROWS_AS(PrimeContext(2), Error);
}

TEST_CASE("residue arithmetic closes at min precision") {
  ResidueElement a(5, 3, 7), b(5, 2, 24);
  auto c = a * b;
  CHECK(c.precision() == 2);
  CHECK(c.value() == (7 * 24) % 25);
  auto inv = a.inverse();
  CHECK((a * inv).value() == 1);
  CHECK_THROWS_AS(ResidueElement(5, 3, 10).inverse(), Error);
  CHECK((-a + a).is_zero());
  CHECK(ResidueElement(3, 4, 18).shifted_down(2).value() == 2);
}

TEST_CASE("square classes") {
  CHECK(square_class(ResidueElement(3, 2, 2)) == SquareClass(SquareClass::Tag::U));
  CHECK(square_class(ResidueElement(3, 3, 3)) == SquareClass(SquareClass::Tag::Pi));
  CHECK(square_class(ResidueElement(3, 3, 4)) == SquareClass(SquareClass::Tag::One));
  for (std::uint32_t p : {3u, 5u, 7u}) {
    PrimeContext ctx(p);
    const int n = 6;
    const SquareClass::Tag tags[] = {SquareClass::Tag::One, SquareClass::Tag::U, SquareClass::Tag::Pi,
                                     SquareClass::Tag::UPi};
    for (auto ta : tags)
      for (auto tb : tags) {
        SquareClass a(ta), b(tb);
        auto prod = a.representative(ctx, n) * b.representative(ctx, n);
        CHECK(square_class(prod) == a * b);
      }
  }
  CHECK(to_string(SquareClass::parse("upi")) == "upi");
}

TEST_CASE("hilbert symbol matches solvability of z^2 = a x^2 + b y^2") {
  // Primitive zero mod p^3 with min derivative valuation e <= 1 lifts (3 >= 2e + 1).
  for (std::uint32_t p : {3u, 5u, 7u}) {
    PrimeContext ctx(p);
    const std::int64_t P = p, M = P * P * P;
    auto val = [&](std::int64_t v) {
      v %= M;
      if (v < 0) v += M;
      if (v == 0) return 3;
      int k = 0;
      while (v % P == 0) v /= P, ++k;
      return k;
    };
    for (int va = 0; va < 2; ++va)
      for (std::int64_t ea : {std::int64_t{1}, ctx.u()})
        for (int vb = 0; vb < 2; ++vb)
          for (std::int64_t eb : {std::int64_t{1}, ctx.u()}) {
            const std::int64_t a = ea * (va ? P : 1), b = eb * (vb ? P : 1);
            bool found = false;
            for (int pivot = 0; pivot < 3 && !found; ++pivot)
              for (std::int64_t s1 = 0; s1 < M && !found; ++s1)
                for (std::int64_t s2 = 0; s2 < M && !found; ++s2) {
                  std::int64_t v[3];
                  int fi = 0;
                  for (int i = 0; i < 3; ++i) {
                    if (i == pivot) v[i] = 1;
                    else v[i] = (fi++ == 0 ? s1 : s2);
                  }
                  if ((pivot >= 1 && v[0] % P) || (pivot == 2 && v[1] % P)) continue;
                  const std::int64_t x = v[0], y = v[1], z = v[2];
                  std::int64_t f = (z * z - a * (x * x % M) - b * (y * y % M)) % M;
                  if (f != 0) continue;
                  int e = std::min({val(2 * z), val(2 * a * x), val(2 * b * y)});
                  if (e <= 1) found = true;
                }
            CHECK(hilbert_symbol(va, ea, vb, eb, p) == (found ? 1 : -1));
          }
  }
}

TEST_CASE("chi_Y examples and properties") {
  CharDescriptor unram(SquareClass(SquareClass::Tag::U));
  CHECK(chi_eval(unram, ResidueElement(5, 3, 2)) == 1);
  CHECK(chi_eval(unram, ResidueElement(5, 3, 5)) == -1);
  CharDescriptor ram_pi(SquareClass(SquareClass::Tag::Pi));
  CHECK(chi_eval(ram_pi, ResidueElement(5, 3, 2)) == -1);
  CHECK_THROWS_AS(chi_eval(ram_pi, ResidueElement(5, 3, 0)), Error);

  std::mt19937_64 rng(12345);
  for (std::uint32_t p : {3u, 5u, 7u}) {
    PrimeContext ctx(p);
    const int n = 6;
    const std::int64_t M = prime_power(p, n);
    std::uniform_int_distribution<std::int64_t> dist(1, M - 1);
    for (auto tag : {SquareClass::Tag::U, SquareClass::Tag::Pi, SquareClass::Tag::UPi}) {
      CharDescriptor y{SquareClass(tag)};
      auto minus_d = -SquareClass(tag).representative(ctx, n);
      CHECK(chi_eval(y, minus_d) == 1);
      for (int trial = 0; trial < 200; ++trial) {
        ResidueElement a(p, n, dist(rng)), b(p, n, dist(rng));
        if (a.is_zero() || b.is_zero()) continue;
        auto ab = a * b;
        if (ab.is_zero() || valuation(a) + valuation(b) >= n - 1) continue;
        CHECK(chi_eval(y, ab) == chi_eval(y, a) * chi_eval(y, b));
      }
      for (std::int64_t a = 1; a < static_cast<std::int64_t>(p); ++a) {
        ResidueElement x(p, n, a * a + static_cast<std::int64_t>(p) * 7);
        CHECK(chi_eval(y, x) == 1);
      }
    }
  }
}

TEST_CASE("valuation is additive") {
  std::mt19937_64 rng(7);
  for (std::uint32_t p : {3u, 5u}) {
    const int n = 8;
    std::uniform_int_distribution<std::int64_t> dist(1, prime_power(p, n) - 1);
    for (int i = 0; i < 300; ++i) {
      ResidueElement a(p, n, dist(rng)), b(p, n, dist(rng));
      if (valuation(a) + valuation(b) < n) CHECK(valuation(a * b) == valuation(a) + valuation(b));
    }
  }
}

TEST_CASE("unit square roots") {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const int n = 5;
    const std::int64_t M = prime_power(p, n);
    for (std::int64_t x = 1; x < M; x += 7) {
      if (x % p == 0) continue;
      ResidueElement e(p, n, x);
      auto r = unit_sqrt(e);
      CHECK(r.has_value() == (brute_legendre(x, p) == 1));
      if (r) CHECK(((*r) * (*r)).value() == x);
    }
  }
}
