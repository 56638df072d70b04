#include "twchar/classes.hpp"
#include "twchar/error.hpp"

#include <doctest.h>

#include <random>

using namespace twchar;
using Tag = SquareClass::Tag;

namespace {

SquareClass sc(Tag t) { return SquareClass(t); }

ThetaClass type_II(std::uint32_t p, Tag D, Tag A, Tag r, Tag s) {
  ThetaClass c;
  c.kind = ClassKind::II;
  c.p = p;
  c.D = sc(D);
  c.A = sc(A);
  c.r = sc(r);
  c.s = sc(s);
  c.a = {1, 1};
  c.b = {2, 1};
  c.Y = CharDescriptor(sc(Tag::U));
  return c;
}

std::int64_t rep(Tag t, const PrimeContext& ctx) { return SquareClass(t).representative(ctx, 1 + 8).value(); }

// v^T g J v straight from the matrix entries.
ResidueElement raw_form(const ResidueMatrix4& g, const std::array<std::int64_t, 4>& v) {
  // J = [[0, w], [-w, 0]], w = antidiag(1, 1)
  const std::array<std::array<int, 4>, 4> J{{{0, 0, 0, 1}, {0, 0, 1, 0}, {0, -1, 0, 0}, {-1, 0, 0, 0}}};
  ResidueElement acc(g.prime(), g.precision(), 0);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j)
        if (J[k][j] != 0) acc += g.at(i, k) * ResidueElement(g.prime(), g.precision(), v[i] * v[j] * J[k][j]);
  return acc;
}

std::vector<ThetaClass> sample_classes(std::uint32_t p) {
  const PrimeContext ctx(p);
  std::vector<ThetaClass> out;
  for (Tag D : {Tag::U, Tag::Pi, Tag::UPi}) {
    const std::vector<Tag> twists = D == Tag::U ? std::vector<Tag>{Tag::One, Tag::Pi} : std::vector<Tag>{Tag::One, Tag::U};
    for (Tag r : twists)
      for (Tag s : twists) {
        ThetaClass c;
        c.kind = ClassKind::I;
        c.p = p;
        c.D = sc(D);
        c.r = sc(r);
        c.s = sc(s);
        c.a = {1, 1};
        c.b = {1, p - 1};
        out.push_back(c);
      }
  }
  for (auto [D, A] : std::vector<std::pair<Tag, Tag>>{{Tag::Pi, Tag::U}, {Tag::U, Tag::Pi}, {Tag::UPi, Tag::Pi}}) {
    const SquareClass C = sc(D) * sc(A);
    const Tag r = D == Tag::U ? Tag::Pi : Tag::U;
    const Tag s = C == sc(Tag::U) ? Tag::Pi : Tag::U;
    out.push_back(type_II(p, D, A, Tag::One, Tag::One));
    out.push_back(type_II(p, D, A, r, s));
  }
  ThetaClass iii;
  iii.kind = ClassKind::III;
  iii.p = p;
  iii.D = sc(Tag::Pi);
  iii.A = sc(Tag::U);
  iii.a = {1, 1};
  iii.b = {2, 1};
  out.push_back(iii);
  iii.D = sc(Tag::U);
  iii.A = sc(Tag::Pi);
  iii.br3 = TypeIIITwist::SqrtA;
  out.push_back(iii);
  if (!ctx.minus_one_is_square()) {
    iii.D = sc(Tag::Pi);
    iii.A = sc(Tag::U);
    iii.br3 = TypeIIITwist::DPlusI;
    out.push_back(iii);
  }
  ThetaClass iv;
  iv.kind = ClassKind::IV;
  iv.p = p;
  iv.A = sc(Tag::U);
  iv.a = {1, 2};
  iv.b = {1, 1};
  out.push_back(iv);
  iv.br4 = sc(Tag::Pi);
  out.push_back(iv);
  if (ctx.minus_one_is_square()) {
    iv.A = sc(Tag::Pi);
    iv.br4 = sc(Tag::U);
    out.push_back(iv);
  }
  return out;
}

}  // namespace

TEST_CASE("quadratic extension arithmetic") {
  const std::uint32_t p = 5;
  const int N = 4;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> dist(0, 624);
  for (std::int64_t c : {2, 5, 10}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = QuadExtElem::of(dist(rng), dist(rng), c, p, N);
      const auto y = QuadExtElem::of(dist(rng), dist(rng), c, p, N);
      CHECK((x * y).norm() == x.norm() * y.norm());
      CHECK((x * y).conj() == x.conj() * y.conj());
      CHECK((x * x.conj()).x1().is_zero());
      CHECK((x * x.conj()).x0() == x.norm());
      CHECK((x + x.conj()).x0() == x.trace());
    }
    const auto root = QuadExtElem::of(0, 1, c, p, N);
    CHECK(root * root == QuadExtElem::of(c, 0, c, p, N));
  }
}

TEST_CASE("biquadratic field: basis relations and Galois action") {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const PrimeContext ctx(p);
    const int N = 4;
    const std::int64_t m = prime_power(p, N);
    std::mt19937_64 rng(p);
    std::uniform_int_distribution<std::int64_t> dist(0, m - 1);
    for (auto [D, A] : std::vector<std::pair<Tag, Tag>>{{Tag::Pi, Tag::U}, {Tag::U, Tag::Pi}, {Tag::UPi, Tag::Pi},
                                                        {Tag::U, Tag::UPi}, {Tag::Pi, Tag::UPi}}) {
      const BiquadField f = make_biquad_field(ctx, sc(D), sc(A), N);
      const BiquadElem e1(f, {0, 1, 0, 0}), e2(f, {0, 0, 1, 0}), e3(f, {0, 0, 0, 1});
      CHECK(e1 * e1 == BiquadElem(f, {rep(D, ctx), 0, 0, 0}));
      CHECK(e2 * e2 == BiquadElem(f, {rep(A, ctx), 0, 0, 0}));
      CHECK(e3 * e3 == BiquadElem(f, {f.C, 0, 0, 0}));
      // (sqrt D sqrt A)^2 = D A
      const BiquadElem da = e1 * e2;
      CHECK(da * da == BiquadElem(f, {rep(D, ctx) * rep(A, ctx), 0, 0, 0}));
      for (int t = 0; t < 30; ++t) {
        const BiquadElem x(f, {dist(rng), dist(rng), dist(rng), dist(rng)});
        const BiquadElem y(f, {dist(rng), dist(rng), dist(rng), dist(rng)});
        CHECK(x * y == y * x);
        CHECK((x * y) * e1 == x * (y * e1));
        CHECK((x * y).sigma() == x.sigma() * y.sigma());
        CHECK((x * y).tau() == x.tau() * y.tau());
        CHECK(x.sigma().sigma() == x);
        CHECK(x.sigma().tau() == x.tau().sigma());
        // E3 is the sigma-fixed field: x sigma(x) lies there.
        CHECK((x * x.sigma()).in_E3());
      }
    }
  }
}

TEST_CASE("representatives follow the displayed matrices") {
  const PrimeContext ctx(5);
  ThetaClass c = type_II(5, Tag::Pi, Tag::U, Tag::One, Tag::U);
  const int N = 4;
  const auto g = representative(c, N);
  const std::int64_t D = 5, AD = 10, s = 2;
  CHECK(g.raw(0, 0) == 1);
  CHECK(g.raw(0, 3) == D);
  CHECK(g.raw(1, 1) == 2 * s);
  CHECK(g.raw(1, 2) == AD * s);
  CHECK(g.raw(2, 1) == s);
  CHECK(g.raw(3, 0) == 1);
  CHECK(g.raw(0, 1) == 0);

  // Type I at r = s = 1 is the torus element t itself.
  ThetaClass i;
  i.kind = ClassKind::I;
  i.p = 5;
  i.D = sc(Tag::Pi);
  i.a = {3, 4};
  i.b = {2, 7};
  const auto t = representative(i, N);
  const std::array<std::array<std::int64_t, 4>, 4> expect{{{3, 0, 0, 20}, {0, 2, 35, 0}, {0, 7, 2, 0}, {4, 0, 0, 3}}};
  CHECK(t == ResidueMatrix4::from_rows(5, N, expect));
}

TEST_CASE("regularity and kind errors") {
  ThetaClass c = type_II(3, Tag::Pi, Tag::U, Tag::One, Tag::One);
  c.a = {1, 0};
  CHECK_THROWS_AS(representative(c, 4), Error);
  try {
    representative(c, 4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotThetaRegular);
  }
  c.a = {1, 27};  // zero mod 3^3 within the margin digit at N = 4
  try {
    jacobian_factor(c, false, 4);
    FAIL("expected NotThetaRegular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotThetaRegular);
  }

  ThetaClass i;
  i.kind = ClassKind::I;
  i.p = 3;
  i.D = sc(Tag::Pi);
  i.a = {1, 2};
  i.b = {1, 2};  // a / sigma a = b / sigma b
  try {
    representative(i, 5);
    FAIL("expected NotThetaRegular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotThetaRegular);
  }
  i.b = {2, 1};
  try {
    norm_map(i, 4);
    FAIL("expected WrongKind");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongKind);
  }

  ThetaClass iv;
  iv.kind = ClassKind::IV;
  iv.p = 3;
  iv.A = sc(Tag::Pi);
  try {
    representative(iv, 4);
    FAIL("expected NotCyclic");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCyclic);
  }

  ThetaClass bad = type_II(3, Tag::Pi, Tag::U, Tag::Pi, Tag::One);  // pi is not a representative for D = pi
  try {
    representative(bad, 4);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("q_form_of agrees with v^T g J v") {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    std::mt19937_64 rng(p * 11);
    for (const auto& c : sample_classes(p)) {
      const int N = 5;
      const auto g = representative(c, N);
      const auto q = q_form_of(g, c.kind);
      const bool reorder = c.kind == ClassKind::I || c.kind == ClassKind::II;
      std::uniform_int_distribution<std::int64_t> dist(0, prime_power(p, N) - 1);
      for (int t = 0; t < 20; ++t) {
        const std::array<std::int64_t, 4> v{dist(rng), dist(rng), dist(rng), dist(rng)};
        // q is in (x, y, z, t); the raw product uses (t, z, x, y) for types I and II.
        const std::array<std::int64_t, 4> raw = reorder ? std::array<std::int64_t, 4>{v[3], v[2], v[0], v[1]} : v;
        CHECK(q.evaluate(v) == raw_form(g, raw));
      }
    }
  }
}

TEST_CASE("type I and II forms match the displayed polynomials") {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const PrimeContext ctx(p);
    const int N = 6;
    for (const auto& c : sample_classes(p)) {
      if (c.kind != ClassKind::I && c.kind != ClassKind::II) continue;
      const std::int64_t D = c.D.representative(ctx, N).value();
      const std::int64_t B = c.kind == ClassKind::I ? D : (c.D * c.A).representative(ctx, N).value();
      const std::int64_t r = c.r.representative(ctx, N).value(), s = c.s.representative(ctx, N).value();
      const std::int64_t a2 = c.a[1], b2 = c.b[1];
      // -t^2 a2 D r - z^2 b2 B s + x^2 b2 s + y^2 a2 r
      const auto expect = QuadForm4::from_monomials(
          p, N, {{0, 0, b2 * s}, {1, 1, a2 * r}, {2, 2, -b2 * B * s}, {3, 3, -a2 * D * r}});
      CHECK(q_form_of(representative(c, N), c.kind).gram() == expect.gram());

      // b2 s (x^2 - r' y^2 - B z^2 + r' D t^2), when b2 s is a unit.
      if (!c.s.odd_valuation()) {
        const auto f = factored_form(c, N);
        const ResidueElement rp = -(ctx.elem(N, a2 * r)) * ctx.elem(N, b2 * s).inverse();
        const auto q2 = QuadForm4::diagonal(p, N, {1, (-rp).value(), -B, (rp * ctx.elem(N, D)).value()});
        CHECK(f.form.gram() == q2.gram());
        CHECK(f.form.unit_prefactor() == ctx.elem(N, b2 * s));
      }
    }
  }
}

TEST_CASE("type III forms match the displayed polynomials") {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const PrimeContext ctx(p);
    const int N = 6;
    for (const auto& c : sample_classes(p)) {
      if (c.kind != ClassKind::III) continue;
      const std::int64_t D = c.D.representative(ctx, N).value();
      const std::int64_t A = c.br3 == TypeIIITwist::DPlusI ? -1 : c.A.representative(ctx, N).value();
      std::int64_t br1 = 1, br2 = 0;
      if (c.br3 == TypeIIITwist::SqrtA) br1 = 0, br2 = 1;
      if (c.br3 == TypeIIITwist::DPlusI) br1 = *ctx.d(), br2 = 1;
      // br2 (t^2 + A z^2 - D y^2 - A D x^2) + 2 br1 (z t - D x y)
      const auto expect = QuadForm4::from_monomials(
          p, N, {{3, 3, br2}, {2, 2, br2 * A}, {1, 1, -br2 * D}, {0, 0, -br2 * A * D}, {2, 3, 2 * br1}, {0, 1, -2 * br1 * D}});
      CHECK(q_form_of(representative(c, N), c.kind).gram() == expect.gram());
    }
  }
}

TEST_CASE("type IV forms are br times the displayed Q") {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const PrimeContext ctx(p);
    const int N = 6;
    for (const auto& c : sample_classes(p)) {
      if (c.kind != ClassKind::IV) continue;
      const auto d = type_IV_D(c, ctx);
      const std::int64_t A = literal_A(c, ctx);
      // 2zt - (D - sigma D)/(2 sqrt A) (y^2 + A x^2) - (D + sigma D) x y
      const auto expect = QuadForm4::from_monomials(
          p, N - 1, {{2, 3, 2}, {1, 1, -d[1]}, {0, 0, -d[1] * A}, {0, 1, -2 * d[0]}});
      const auto f = factored_form(c, N);
      CHECK(f.scalar_valuation == (c.br4 == sc(Tag::Pi) ? 1 : 0));
      CHECK(f.form.reduced(N - 1).gram() == expect.gram());
      CHECK(f.form.unit_prefactor().value() % p == (c.br4 == sc(Tag::U) ? ctx.u() % p : 1));
    }
  }
}

TEST_CASE("degenerate g gives the zero form") {
  ResidueMatrix4 g = ResidueMatrix4::identity(3, 4);
  CHECK(q_form_of(g, ClassKind::I).gram() == ResidueMatrix4(3, 4));
}

TEST_CASE("norm map: determinants agree and equal det g") {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const PrimeContext ctx(p);
    const int N = 5;
    for (const auto& c : sample_classes(p)) {
      if (c.kind != ClassKind::II && c.kind != ClassKind::IV) continue;
      const CYClass y = norm_map(c, N);
      CHECK(y.det[0] == y.det[1]);
      CHECK(y.det[0].x1().is_zero());
      CHECK(y.det_F == representative(c, N).det());
      if (c.kind == ClassKind::II) {
        // det = N(a r) N(b s) over E1 and E2
        const std::int64_t D = c.D.representative(ctx, N).value();
        const std::int64_t C = (c.D * c.A).representative(ctx, N).value();
        const std::int64_t r = c.r.representative(ctx, N).value(), s = c.s.representative(ctx, N).value();
        const auto na = QuadExtElem::of(c.a[0] * r, c.a[1] * r, D, p, N).norm();
        const auto nb = QuadExtElem::of(c.b[0] * s, c.b[1] * s, C, p, N).norm();
        CHECK(y.det_F == na * nb);
      }
    }
  }
}

TEST_CASE("norm map: type II traces") {
  const PrimeContext ctx(5);
  const int N = 4;
  ThetaClass c = type_II(5, Tag::Pi, Tag::U, Tag::One, Tag::One);
  c.a = {3, 1};
  c.b = {2, 1};
  const CYClass y = norm_map(c, N);
  // ab + tau(b) sigma(a), with sqrt D sqrt(uD)... expands to 2 a1 b1 + 2 a2 b2 (D/lambda) sqrt A
  const std::int64_t u = ctx.u();
  CHECK(y.trace[0] == QuadExtElem::of(2 * 3 * 2, 2 * 1 * 1 * 5, u, 5, N));
  // a tau(b) + b sigma(a) = 2 a1 b1 - 2 a2 b2 (D/lambda) sqrt A
  CHECK(y.trace[1] == QuadExtElem::of(2 * 3 * 2, -2 * 1 * 1 * 5, u, 5, N));
}

TEST_CASE("jacobian factors") {
  // type II, units, D = pi, AD = u pi: |sqrt D sqrt(AD)| = 1/q
  ThetaClass c = type_II(3, Tag::Pi, Tag::U, Tag::One, Tag::One);
  c.a = {1, 1};
  c.b = {1, 1};
  CHECK(jacobian_factor(c, false) == QPowerValue(1, -2, 3));

  ThetaClass iv;
  iv.kind = ClassKind::IV;
  iv.p = 3;
  iv.A = sc(Tag::U);
  iv.a = {1, 1};
  iv.b = {1, 0};
  CHECK(jacobian_factor(iv, false) == QPowerValue(1, 0, 3));

  for (std::uint32_t p : {3u, 5u, 7u}) {
    const PrimeContext ctx(p);
    for (const auto& k : sample_classes(p)) {
      const auto j = jacobian_factor(k, false, 6);
      const auto j0 = jacobian_factor(k, true, 6);
      CHECK(j.coeff() > 0);
      CHECK(j0.coeff() > 0);
      if (k.kind == ClassKind::I) {
        // |det g|^(1/2) Delta = |r s| |4 a2 b2 D|
        int v = (k.r.odd_valuation() ? 1 : 0) + (k.s.odd_valuation() ? 1 : 0) + (k.D.odd_valuation() ? 1 : 0);
        for (std::int64_t x : {k.a[1], k.b[1]})
          while (x % static_cast<std::int64_t>(p) == 0) x /= p, ++v;
        CHECK(j0 == QPowerValue(1, -2 * v, p));
      }
    }
  }
}

TEST_CASE("twisting by norms keeps the form's invariants") {
  for (std::uint32_t p : {3u, 5u}) {
    const PrimeContext ctx(p);
    const int N = 6;
    for (const auto& c : sample_classes(p)) {
      if (c.kind != ClassKind::II) continue;
      const std::int64_t D = c.D.representative(ctx, N).value();
      const std::int64_t C = (c.D * c.A).representative(ctx, N).value();
      // unit norms e1^2 - e2^2 D and f1^2 - f2^2 C
      const auto nr = QuadExtElem::of(2, 1, D, p, N).norm();
      const auto ns = QuadExtElem::of(1, 1, C, p, N).norm();
      REQUIRE(nr.is_unit());
      REQUIRE(ns.is_unit());
      ResidueMatrix4 g = representative(c, N);
      ResidueMatrix4 h = g;
      for (int i = 0; i < 4; ++i) {
        h.set(i, 0, g.at(i, 0) * nr);
        h.set(i, 3, g.at(i, 3) * nr);
        h.set(i, 1, g.at(i, 1) * ns);
        h.set(i, 2, g.at(i, 2) * ns);
      }
      CHECK(jordan_invariants(q_form_of(g, c.kind)) == jordan_invariants(q_form_of(h, c.kind)));
    }
  }
}

TEST_CASE("twist signs") {
  ThetaClass c = type_II(3, Tag::Pi, Tag::U, Tag::One, Tag::One);
  c.a = {1, 1};
  c.b = {1, 2};  // b2 = -1, so r' = r
  CHECK(twist_sign(c) == 1);
  c.r = sc(Tag::U);
  CHECK(twist_sign(c) == -1);
  CHECK(y_matches_E3(c));
  c.Y = CharDescriptor(sc(Tag::Pi));
  CHECK_FALSE(y_matches_E3(c));

  ThetaClass iv;
  iv.kind = ClassKind::IV;
  iv.p = 5;
  iv.A = sc(Tag::Pi);
  CHECK(twist_sign(iv) == 1);
  iv.br4 = sc(Tag::U);
  CHECK(twist_sign(iv) == -1);
}

TEST_CASE("class kind names") {
  for (auto k : {ClassKind::I, ClassKind::II, ClassKind::III, ClassKind::IV, ClassKind::RamifiedAppendix})
    CHECK(parse_class_kind(to_string(k)) == k);
  CHECK(parse_class_kind("II-ramified-appendix") == ClassKind::RamifiedAppendix);
  CHECK_THROWS_AS(parse_class_kind("V"), Error);
}
