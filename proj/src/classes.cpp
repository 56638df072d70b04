#include "twchar/classes.hpp"

#include "twchar/error.hpp"

#include <utility>

namespace twchar {

namespace {

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  std::int64_t r = static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
  return r < 0 ? r + m : r;
}

std::int64_t addmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  std::int64_t r = (a + b) % m;
  return r < 0 ? r + m : r;
}

bool negligible(const ResidueElement& x) {
  // Zero at precision N with one digit of margin.
  return x.reduced(x.precision() - 1).is_zero();
}

int val_checked(const ResidueElement& x, const char* what) {
  if (negligible(x)) throw Error(ErrorCode::InsufficientPrecision, std::string(what) + " vanishes at working precision");
  return valuation(x);
}

bool is_type_I_like(ClassKind k) { return k == ClassKind::I || k == ClassKind::II || k == ClassKind::RamifiedAppendix; }

// Representatives of F^x / N(F(sqrt c)^x).
bool twist_in_reps(SquareClass t, SquareClass c) {
  if (c == SquareClass(SquareClass::Tag::U))
    return t.is_one() || t == SquareClass(SquareClass::Tag::Pi);
  return t.is_one() || t == SquareClass(SquareClass::Tag::U);
}

SquareClass type_II_C(const ThetaClass& cls) { return cls.D * cls.A; }

QuadExtElem e3(const ThetaClass& cls, const PrimeContext& ctx, int N, std::int64_t x0, std::int64_t x1) {
  return QuadExtElem::of(x0, x1, literal_A(cls, ctx), ctx.p(), N);
}

QuadExtElem type_III_IV_twist(const ThetaClass& cls, const PrimeContext& ctx, int N) {
  if (cls.kind == ClassKind::III) {
    switch (cls.br3) {
      case TypeIIITwist::One: return e3(cls, ctx, N, 1, 0);
      case TypeIIITwist::SqrtA: return e3(cls, ctx, N, 0, 1);
      case TypeIIITwist::DPlusI: return e3(cls, ctx, N, *ctx.d(), 1);
    }
  }
  return e3(cls, ctx, N, cls.br4.representative(ctx, N).value(), 0);
}

// r = br / b in E3.
QuadExtElem twist_r(const ThetaClass& cls, const PrimeContext& ctx, int N) {
  QuadExtElem b = e3(cls, ctx, N, cls.b[0], cls.b[1]);
  ResidueElement nb = b.norm();
  if (!nb.is_unit()) throw Error(ErrorCode::InvalidArgument, "b must be a unit of E3");
  QuadExtElem binv = b.conj() * QuadExtElem(nb.inverse(), nb.with_value(0), b.radicand());
  return type_III_IV_twist(cls, ctx, N) * binv;
}

// -a2 r / (b2 s) as (valuation, unit mod p).
std::pair<int, std::int64_t> r_prime(const ThetaClass& cls, const PrimeContext& ctx, int N) {
  ResidueElement a2 = ctx.elem(N, cls.a[1]), b2 = ctx.elem(N, cls.b[1]);
  ResidueElement r = cls.r.representative(ctx, N), s = cls.s.representative(ctx, N);
  ResidueElement num = -(a2 * r), den = b2 * s;
  int v = val_checked(num, "a2 r") - val_checked(den, "b2 s");
  std::int64_t unit = (unit_part(num) * unit_part(den).inverse()).value() % ctx.p();
  return {v, unit};
}

// M(x) = [[x1, x2 A], [x2, x1]]
void put_block(ResidueMatrix4& g, int r0, int c0, const QuadExtElem& x) {
  g.set(r0, c0, x.x0());
  g.set(r0, c0 + 1, x.x1() * x.radicand());
  g.set(r0 + 1, c0, x.x1());
  g.set(r0 + 1, c0 + 1, x.x0());
}

// Elements of E = E3(X), X^2 = D, for type IV.
struct QuarticElem {
  QuadExtElem c0, c1;
};

QuarticElem qmul(const QuarticElem& x, const QuarticElem& y, const QuadExtElem& D) {
  return {x.c0 * y.c0 + x.c1 * y.c1 * D, x.c0 * y.c1 + x.c1 * y.c0};
}

QuarticElem qadd(const QuarticElem& x, const QuarticElem& y) { return {x.c0 + y.c0, x.c1 + y.c1}; }

}  // namespace

QuadExtElem::QuadExtElem(ResidueElement x0, ResidueElement x1, ResidueElement c)
    : x0_(std::move(x0)), x1_(std::move(x1)), c_(std::move(c)) {}

QuadExtElem QuadExtElem::of(std::int64_t x0, std::int64_t x1, std::int64_t c, std::uint32_t p, int precision) {
  return QuadExtElem(ResidueElement(p, precision, x0), ResidueElement(p, precision, x1),
                     ResidueElement(p, precision, c));
}

QuadExtElem QuadExtElem::conj() const { return QuadExtElem(x0_, -x1_, c_); }
ResidueElement QuadExtElem::norm() const { return x0_ * x0_ - x1_ * x1_ * c_; }
ResidueElement QuadExtElem::trace() const { return x0_ + x0_; }

QuadExtElem operator+(const QuadExtElem& a, const QuadExtElem& b) {
  return QuadExtElem(a.x0_ + b.x0_, a.x1_ + b.x1_, a.c_);
}
QuadExtElem operator-(const QuadExtElem& a, const QuadExtElem& b) {
  return QuadExtElem(a.x0_ - b.x0_, a.x1_ - b.x1_, a.c_);
}
QuadExtElem operator*(const QuadExtElem& a, const QuadExtElem& b) {
  if (!(a.c_ == b.c_)) throw Error(ErrorCode::InvalidArgument, "elements of different quadratic extensions");
  return QuadExtElem(a.x0_ * b.x0_ + a.x1_ * b.x1_ * a.c_, a.x0_ * b.x1_ + a.x1_ * b.x0_, a.c_);
}
bool operator==(const QuadExtElem& a, const QuadExtElem& b) {
  return a.x0_ == b.x0_ && a.x1_ == b.x1_ && a.c_ == b.c_;
}

BiquadElem::BiquadElem(const BiquadField& f, std::array<std::int64_t, 4> coords) : f_(f), x_{} {
  const std::int64_t m = prime_power(f.p, f.precision);
  for (int i = 0; i < 4; ++i) x_[i] = addmod(coords[i], 0, m);
}

BiquadElem BiquadElem::sigma() const {
  return BiquadElem(f_, {x_[0], -x_[1], x_[2], -x_[3]});
}

BiquadElem BiquadElem::tau() const {
  return BiquadElem(f_, {x_[0], x_[1], -x_[2], -x_[3]});
}

QuadExtElem BiquadElem::as_E3() const {
  if (!in_E3()) throw Error(ErrorCode::Inconsistent, "element does not lie in E3");
  return QuadExtElem::of(x_[0], x_[2], f_.A, f_.p, f_.precision);
}

BiquadElem operator+(const BiquadElem& a, const BiquadElem& b) {
  return BiquadElem(a.f_, {a.x_[0] + b.x_[0], a.x_[1] + b.x_[1], a.x_[2] + b.x_[2], a.x_[3] + b.x_[3]});
}

BiquadElem operator*(const BiquadElem& a, const BiquadElem& b) {
  const BiquadField& f = a.f_;
  const std::int64_t m = prime_power(f.p, f.precision);
  const auto& x = a.x_;
  const auto& y = b.x_;
  auto mm = [m](std::int64_t u, std::int64_t v) { return mulmod(u, v, m); };
  const std::int64_t d_l = f.D / f.lambda, a_l = f.A / f.lambda;
  std::array<std::int64_t, 4> z{};
  z[0] = (mm(x[0], y[0]) + mm(f.D, mm(x[1], y[1])) + mm(f.A, mm(x[2], y[2])) + mm(f.C, mm(x[3], y[3]))) % m;
  z[1] = (mm(x[0], y[1]) + mm(x[1], y[0]) + mm(a_l, (mm(x[2], y[3]) + mm(x[3], y[2])) % m)) % m;
  z[2] = (mm(x[0], y[2]) + mm(x[2], y[0]) + mm(d_l, (mm(x[1], y[3]) + mm(x[3], y[1])) % m)) % m;
  z[3] = (mm(x[0], y[3]) + mm(x[3], y[0]) + mm(f.lambda, (mm(x[1], y[2]) + mm(x[2], y[1])) % m)) % m;
  return BiquadElem(f, z);
}

BiquadField make_biquad_field(const PrimeContext& ctx, SquareClass D, SquareClass A, int precision) {
  if (D.is_one() || A.is_one() || D == A) throw Error(ErrorCode::InvalidArgument, "D and A must be distinct nonsquares");
  std::int64_t lambda = 1;
  if (D.odd_valuation() && A.odd_valuation()) lambda *= ctx.p();
  if (D.nonsquare_unit() && A.nonsquare_unit()) lambda *= ctx.u();
  return BiquadField{ctx.p(), precision, D.representative(ctx, precision).value(),
                     A.representative(ctx, precision).value(), (D * A).representative(ctx, precision).value(),
                     lambda};
}

std::string to_string(ClassKind k) {
  switch (k) {
    case ClassKind::I: return "I";
    case ClassKind::II: return "II";
    case ClassKind::III: return "III";
    case ClassKind::IV: return "IV";
    case ClassKind::RamifiedAppendix: return "IV-ramified-appendix";
  }
  return "?";
}

ClassKind parse_class_kind(std::string_view s) {
  if (s == "I") return ClassKind::I;
  if (s == "II") return ClassKind::II;
  if (s == "III") return ClassKind::III;
  if (s == "IV") return ClassKind::IV;
  if (s == "IV-ramified-appendix" || s == "II-ramified-appendix") return ClassKind::RamifiedAppendix;
  throw Error(ErrorCode::InvalidArgument, "unknown class kind '" + std::string(s) + "'");
}

std::int64_t literal_D(const ThetaClass& cls, const PrimeContext& ctx) {
  return (cls.D.nonsquare_unit() ? ctx.u() : 1) * (cls.D.odd_valuation() ? ctx.p() : 1);
}

std::int64_t literal_A(const ThetaClass& cls, const PrimeContext& ctx) {
  const bool unramified = cls.A == SquareClass(SquareClass::Tag::U);
  if (cls.kind == ClassKind::III && cls.br3 == TypeIIITwist::DPlusI) return -1;
  if (cls.kind == ClassKind::IV && unramified && !ctx.minus_one_is_square()) return -1;
  return (cls.A.nonsquare_unit() ? ctx.u() : 1) * (cls.A.odd_valuation() ? ctx.p() : 1);
}

std::array<std::int64_t, 2> type_IV_D(const ThetaClass& cls, const PrimeContext& ctx) {
  if (cls.d) return *cls.d;
  if (literal_A(cls, ctx) == -1) return {*ctx.d(), 1};
  return {0, 1};
}

void validate(const ThetaClass& cls, int precision) {
  const PrimeContext ctx(cls.p);
  const int N = precision;
  if (N < 2) throw Error(ErrorCode::PrecisionTooLow, "representatives need N >= 2");
  auto zero = [&](std::int64_t v) { return negligible(ctx.elem(N, v)); };
  auto irregular = [](const std::string& why) { throw Error(ErrorCode::NotThetaRegular, why); };
  const SquareClass U(SquareClass::Tag::U), Pi(SquareClass::Tag::Pi);

  switch (cls.kind) {
    case ClassKind::I:
      if (cls.D.is_one()) throw Error(ErrorCode::InvalidArgument, "D must be a nonsquare");
      if (!twist_in_reps(cls.r, cls.D) || !twist_in_reps(cls.s, cls.D))
        throw Error(ErrorCode::InvalidArgument, "twist outside the representative set");
      break;
    case ClassKind::II:
    case ClassKind::RamifiedAppendix:
      if (cls.D.is_one() || cls.A.is_one() || cls.D == cls.A)
        throw Error(ErrorCode::InvalidArgument, "D and A must be distinct nonsquares");
      if (!twist_in_reps(cls.r, cls.D) || !twist_in_reps(cls.s, type_II_C(cls)))
        throw Error(ErrorCode::InvalidArgument, "twist outside the representative set");
      if (cls.kind == ClassKind::RamifiedAppendix &&
          (cls.D != U || cls.A != Pi || !cls.r.is_one() || !cls.Y.ramified()))
        throw Error(ErrorCode::InvalidArgument, "the ramified appendix covers D = u, A = pi, r = 1, Y ramified");
      break;
    case ClassKind::III: {
      if (cls.D.is_one() || cls.A.is_one() || cls.D == cls.A)
        throw Error(ErrorCode::InvalidArgument, "D and A must be distinct nonsquares");
      const bool ok = cls.br3 == TypeIIITwist::One ||
                      (cls.br3 == TypeIIITwist::SqrtA &&
                       ((cls.D == U && cls.A.odd_valuation()) ||
                        (cls.A == U && ctx.minus_one_is_square() && cls.D.odd_valuation()))) ||
                      (cls.br3 == TypeIIITwist::DPlusI && !ctx.minus_one_is_square() && cls.A == U &&
                       cls.D.odd_valuation());
      if (!ok) throw Error(ErrorCode::InvalidArgument, "twist " + to_string(cls.br3) + " not available for this D, A");
      break;
    }
    case ClassKind::IV: {
      if (cls.A.is_one()) throw Error(ErrorCode::InvalidArgument, "A must be a nonsquare");
      if (cls.A.odd_valuation() && !ctx.minus_one_is_square() && !cls.d)
        throw Error(ErrorCode::NotCyclic, "E/F is dihedral for A ramified and p = 3 mod 4");
      const bool unram = !cls.A.odd_valuation();
      if (!(cls.br4.is_one() || cls.br4 == (unram ? Pi : U)))
        throw Error(ErrorCode::InvalidArgument, "twist outside the representative set");
      break;
    }
  }

  if (is_type_I_like(cls.kind)) {
    if (zero(cls.a[0]) || zero(cls.a[1]) || zero(cls.b[0]) || zero(cls.b[1]))
      irregular("a/sigma a or b/sigma b equals +-1");
    if (cls.kind == ClassKind::I) {
      const std::int64_t m = prime_power(cls.p, N);
      if (zero(addmod(mulmod(cls.a[1], cls.b[0], m), -mulmod(cls.a[0], cls.b[1], m), m)))
        irregular("a/sigma a = b/sigma b");
    }
  } else if (cls.kind == ClassKind::III) {
    const std::int64_t m = prime_power(cls.p, N);
    if ((zero(cls.a[0]) && zero(cls.a[1])) || (zero(cls.b[0]) && zero(cls.b[1])))
      irregular("alpha/sigma alpha equals +-1");
    if (zero(addmod(mulmod(cls.a[1], cls.b[0], m), -mulmod(cls.a[0], cls.b[1], m), m)))
      irregular("alpha/sigma alpha = tau(alpha/sigma alpha)");
  } else {
    if (zero(cls.b[0]) && zero(cls.b[1])) irregular("alpha = sigma^2 alpha");
  }
}

ResidueMatrix4 representative(const ThetaClass& cls, int precision) {
  validate(cls, precision);
  const PrimeContext ctx(cls.p);
  const int N = precision;
  ResidueMatrix4 g(cls.p, N);
  if (is_type_I_like(cls.kind)) {
    const ResidueElement D = ctx.elem(N, literal_D(cls, ctx));
    const ResidueElement Bq =
        cls.kind == ClassKind::I ? D : type_II_C(cls).representative(ctx, N);
    const ResidueElement r = cls.r.representative(ctx, N), s = cls.s.representative(ctx, N);
    const ResidueElement a1 = ctx.elem(N, cls.a[0]), a2 = ctx.elem(N, cls.a[1]);
    const ResidueElement b1 = ctx.elem(N, cls.b[0]), b2 = ctx.elem(N, cls.b[1]);
    g.set(0, 0, a1 * r);
    g.set(0, 3, a2 * D * r);
    g.set(1, 1, b1 * s);
    g.set(1, 2, b2 * Bq * s);
    g.set(2, 1, b2 * s);
    g.set(2, 2, b1 * s);
    g.set(3, 0, a2 * r);
    g.set(3, 3, a1 * r);
    return g;
  }
  const QuadExtElem r = twist_r(cls, ctx, N);
  const QuadExtElem ar = e3(cls, ctx, N, cls.a[0], cls.a[1]) * r;
  const QuadExtElem br = e3(cls, ctx, N, cls.b[0], cls.b[1]) * r;
  QuadExtElem upper = br;
  if (cls.kind == ClassKind::III) {
    const ResidueElement D = ctx.elem(N, literal_D(cls, ctx));
    upper = br * QuadExtElem(D, D.with_value(0), br.radicand());
  } else {
    const auto d = type_IV_D(cls, ctx);
    upper = br * e3(cls, ctx, N, d[0], d[1]);
  }
  put_block(g, 0, 0, ar);
  put_block(g, 0, 2, upper);
  put_block(g, 2, 0, br);
  put_block(g, 2, 2, ar);
  return g;
}

QuadForm4 q_form_of(const ResidueMatrix4& g, ClassKind kind) {
  const int N = g.precision();
  ResidueMatrix4 J(g.prime(), N);
  J.set(0, 3, 1);
  J.set(1, 2, 1);
  J.set(2, 1, -1);
  J.set(3, 0, -1);
  const ResidueMatrix4 gJ = g * J;
  const ResidueElement half = ResidueElement(g.prime(), N, 2).inverse();
  ResidueMatrix4 sym(g.prime(), N);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) sym.set(i, j, (gJ.at(i, j) + gJ.at(j, i)) * half);
  if (!is_type_I_like(kind)) return QuadForm4(sym, "g_" + to_string(kind));
  // (x, y, z, t) = (v3, v4, v2, v1)
  constexpr std::array<int, 4> perm{2, 3, 1, 0};
  ResidueMatrix4 out(g.prime(), N);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.set(i, j, sym.at(perm[i], perm[j]));
  return QuadForm4(out, "g_" + to_string(kind));
}

FactoredForm factored_form(const ThetaClass& cls, int precision) {
  const PrimeContext ctx(cls.p);
  const ResidueMatrix4 g = representative(cls, precision);
  const QuadForm4 q = q_form_of(g, cls.kind);
  ResidueElement scalar = ctx.elem(precision, 1);
  if (is_type_I_like(cls.kind))
    scalar = ctx.elem(precision, cls.b[1]) * cls.s.representative(ctx, precision);
  else if (cls.kind == ClassKind::IV)
    scalar = cls.br4.representative(ctx, precision);
  const int k = val_checked(scalar, "prefactor");
  const ResidueElement c = unit_part(scalar);
  const ResidueElement cinv = c.inverse().reduced(precision - k);
  ResidueMatrix4 gram(cls.p, precision - k);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) gram.set(i, j, q.gram().at(i, j).shifted_down(k) * cinv);
  return FactoredForm{QuadForm4(gram, c.reduced(precision - k), q.label()), k};
}

CYClass norm_map(const ThetaClass& cls, int precision) {
  const PrimeContext ctx(cls.p);
  const int N = precision;
  validate(cls, N);
  if (cls.kind == ClassKind::II || cls.kind == ClassKind::RamifiedAppendix) {
    const BiquadField f = make_biquad_field(ctx, cls.D, cls.A, N);
    const std::int64_t r = cls.r.representative(ctx, N).value(), s = cls.s.representative(ctx, N).value();
    const std::int64_t m = prime_power(cls.p, N);
    const BiquadElem a(f, {mulmod(cls.a[0], r, m), mulmod(cls.a[1], r, m), 0, 0});
    const BiquadElem b(f, {mulmod(cls.b[0], s, m), 0, 0, mulmod(cls.b[1], s, m)});
    const std::array<std::pair<BiquadElem, BiquadElem>, 2> comps{std::pair{a * b, b.tau() * a.sigma()},
                                                                  std::pair{a * b.tau(), b * a.sigma()}};
    std::array<QuadExtElem, 2> tr{QuadExtElem::of(0, 0, f.A, cls.p, N), QuadExtElem::of(0, 0, f.A, cls.p, N)};
    std::array<QuadExtElem, 2> dt = tr;
    for (int i = 0; i < 2; ++i) {
      tr[i] = (comps[i].first + comps[i].second).as_E3();
      dt[i] = (comps[i].first * comps[i].second).as_E3();
    }
    if (!(dt[0] == dt[1]) || !dt[0].x1().is_zero())
      throw Error(ErrorCode::Inconsistent, "component determinants disagree");
    return CYClass{tr, dt, dt[0].x0()};
  }
  if (cls.kind != ClassKind::IV)
    throw Error(ErrorCode::WrongKind, "the norm map has no image in C_Y for type " + to_string(cls.kind));

  // One extra digit absorbs the division by N(D) when D = sqrt(pi).
  const int W = N + 1;
  const std::int64_t A = literal_A(cls, ctx);
  const auto dd = type_IV_D(cls, ctx);
  const QuadExtElem D = e3(cls, ctx, W, dd[0], dd[1]);
  const ResidueElement nD = D.norm();
  ResidueElement c2 = nD;
  if (cls.A.odd_valuation()) {
    if (valuation(nD) != 1) throw Error(ErrorCode::InvalidArgument, "N(D) / A must be a unit");
    c2 = nD.shifted_down(1) * ctx.elem(W - 1, A / static_cast<std::int64_t>(cls.p)).inverse();
  } else {
    c2 = nD * ctx.elem(W, A).inverse();
  }
  const auto c = unit_sqrt(c2);
  if (!c) throw Error(ErrorCode::NotCyclic, "N(D)/A is not a square: E/F is dihedral");
  QuadExtElem kappa = e3(cls, ctx, W, 0, 0);
  if (nD.is_unit()) {
    const QuadExtElem gamma = e3(cls, ctx, W, 0, c->value());
    kappa = gamma * D.conj() * QuadExtElem(nD.inverse(), nD.with_value(0), D.radicand());
  } else if (dd[0] == 0 && dd[1] == 1) {
    kappa = e3(cls, ctx, W, c->value(), 0);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unsupported type IV element D");
  }
  if (!(kappa.norm().reduced(N) == ctx.elem(N, -1)))
    throw Error(ErrorCode::Inconsistent, "sigma^2 does not negate sqrt D");

  const QuadExtElem r = twist_r(cls, ctx, W);
  const QuarticElem alpha{e3(cls, ctx, W, cls.a[0], cls.a[1]) * r, e3(cls, ctx, W, cls.b[0], cls.b[1]) * r};
  auto sigma = [&](const QuarticElem& x) { return QuarticElem{x.c0.conj(), x.c1.conj() * kappa}; };
  const QuarticElem s1 = sigma(alpha), s2 = sigma(s1), s3 = sigma(s2);
  const std::array<std::pair<QuarticElem, QuarticElem>, 2> comps{
      std::pair{qmul(alpha, s1, D), qmul(s2, s3, D)}, std::pair{qmul(alpha, s3, D), qmul(s1, s2, D)}};
  auto down = [&](const QuadExtElem& x) {
    return QuadExtElem(x.x0().reduced(N), x.x1().reduced(N), ctx.elem(N, A));
  };
  auto in_E3 = [&](const QuarticElem& x) {
    if (!x.c1.x0().reduced(N).is_zero() || !x.c1.x1().reduced(N).is_zero())
      throw Error(ErrorCode::Inconsistent, "component does not lie in E3");
    return down(x.c0);
  };
  std::array<QuadExtElem, 2> tr{e3(cls, ctx, N, 0, 0), e3(cls, ctx, N, 0, 0)};
  std::array<QuadExtElem, 2> dt = tr;
  for (int i = 0; i < 2; ++i) {
    tr[i] = in_E3(qadd(comps[i].first, comps[i].second));
    dt[i] = in_E3(qmul(comps[i].first, comps[i].second, D));
  }
  if (!(dt[0] == dt[1]) || !dt[0].x1().is_zero())
    throw Error(ErrorCode::Inconsistent, "component determinants disagree");
  return CYClass{tr, dt, dt[0].x0()};
}

QPowerValue jacobian_factor(const ThetaClass& cls, bool at_s0, int precision) {
  const PrimeContext ctx(cls.p);
  const int N = precision;
  validate(cls, N);
  int h = 0;  // value q^(h/2)
  if (is_type_I_like(cls.kind)) {
    const ResidueElement D = ctx.elem(N, literal_D(cls, ctx));
    const ResidueElement Bq = cls.kind == ClassKind::I ? D : type_II_C(cls).representative(ctx, N);
    const QuadExtElem a = QuadExtElem(ctx.elem(N, cls.a[0]), ctx.elem(N, cls.a[1]), D);
    const QuadExtElem b = QuadExtElem(ctx.elem(N, cls.b[0]), ctx.elem(N, cls.b[1]), Bq);
    h = -2 * (val_checked(a.x1(), "a2") + val_checked(b.x1(), "b2")) - valuation(D) - valuation(Bq) +
        val_checked(a.norm(), "N(a)") + val_checked(b.norm(), "N(b)");
  } else {
    const QuadExtElem a = e3(cls, ctx, N, cls.a[0], cls.a[1]);
    const QuadExtElem b = e3(cls, ctx, N, cls.b[0], cls.b[1]);
    QuadExtElem D = e3(cls, ctx, N, literal_D(cls, ctx), 0);
    if (cls.kind == ClassKind::IV) {
      const auto d = type_IV_D(cls, ctx);
      D = e3(cls, ctx, N, d[0], d[1]);
    }
    const QuadExtElem disc = a * a - b * b * D;
    const int vD = val_checked(D.norm(), "N(D)");
    // III: |4 N(b) D| with |D| = |N(D)|^(1/2) for D in F; IV: |4 N(b)| |N(D)|^(1/2).
    h = -2 * val_checked(b.norm(), "N(b)") - vD +
        val_checked(disc.norm(), "N(a^2 - b^2 D)");
  }
  if (at_s0) h -= val_checked(representative(cls, N).det(), "det g");
  return QPowerValue(1, h, cls.p);
}

int twist_sign(const ThetaClass& cls) {
  const PrimeContext ctx(cls.p);
  switch (cls.kind) {
    case ClassKind::I:
    case ClassKind::II:
    case ClassKind::RamifiedAppendix: {
      const auto [v, unit] = r_prime(cls, ctx, 8);
      const int dv = cls.D.odd_valuation() ? 1 : 0;
      const std::int64_t du = cls.D.nonsquare_unit() ? ctx.u() : 1;
      return hilbert_symbol(((v % 2) + 2) % 2, unit, dv, du, cls.p);
    }
    case ClassKind::III: return cls.br3 == TypeIIITwist::One ? 1 : -1;
    case ClassKind::IV: return cls.br4.is_one() ? 1 : -1;
  }
  return 1;
}

bool y_matches_E3(const ThetaClass& cls) {
  if (cls.kind == ClassKind::I) return false;
  return cls.Y.d_class() == cls.A;
}

}  // namespace twchar
