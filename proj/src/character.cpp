#include "twchar/character.hpp"

#include "twchar/error.hpp"

#include <algorithm>
#include <climits>

namespace twchar {

namespace {

bool type_I_like(ClassKind k) { return k == ClassKind::I || k == ClassKind::II || k == ClassKind::RamifiedAppendix; }

struct Scalar {
  int valuation;
  std::int64_t unit;
};

Scalar split(const ResidueElement& x) {
  const int v = valuation(x);
  return {v, unit_part(x).value() % x.prime()};
}

// The scalar the paper factors out of Q_g: b2 s (I, II), br (IV), 1 (III).
Scalar documented_scalar(const ThetaClass& cls, const PrimeContext& ctx, int N) {
  if (type_I_like(cls.kind)) return split(ctx.elem(N, cls.b[1]) * cls.s.representative(ctx, N));
  if (cls.kind == ClassKind::IV) return split(cls.br4.representative(ctx, N));
  return {0, 1};
}

QPowerValue signed_power(int sign, int half_exponent, std::uint32_t q) {
  return QPowerValue(Rational(sign), half_exponent, q);
}

// Prefactor at s = 0 as displayed with each theorem.
QPowerValue paper_prefactor(const ThetaClass& cls, const PrimeContext& ctx, int N) {
  const std::uint32_t q = ctx.q();
  const Scalar sc = documented_scalar(cls, ctx, N);
  const int chi = cls.Y.chi(sc.valuation, sc.unit, q);
  const int vD = cls.D.odd_valuation() ? 1 : 0;
  const int vA = cls.A.odd_valuation() ? 1 : 0;
  switch (cls.kind) {
    case ClassKind::I:
    case ClassKind::II:
    case ClassKind::RamifiedAppendix: {
      const ResidueElement num = -(ctx.elem(N, cls.a[1]) * cls.r.representative(ctx, N));
      const int vr = valuation(num) - sc.valuation;
      // I: |4 D r'|; II: |4 r' D sqrt A|
      const int half = cls.kind == ClassKind::I ? -2 * (vD + vr) : -2 * (vr + vD) - vA;
      return signed_power(chi, half, q);
    }
    case ClassKind::III: {
      // |br tau(br) D|
      const std::int64_t A = literal_A(cls, ctx);
      QuadExtElem br = QuadExtElem::of(1, 0, A, ctx.p(), N);
      if (cls.br3 == TypeIIITwist::SqrtA) br = QuadExtElem::of(0, 1, A, ctx.p(), N);
      if (cls.br3 == TypeIIITwist::DPlusI) br = QuadExtElem::of(*ctx.d(), 1, A, ctx.p(), N);
      return signed_power(1, -2 * (valuation(br.norm()) + vD), q);
    }
    case ClassKind::IV: {
      // chi(br) |br|^-2 |br D sigma(br D)| = chi(br) |N(D)| for br in F
      const auto d = type_IV_D(cls, ctx);
      const int vND = valuation(QuadExtElem::of(d[0], d[1], literal_A(cls, ctx), ctx.p(), N).norm());
      return signed_power(chi, -2 * vND, q);
    }
  }
  return signed_power(1, 0, q);
}

CharSumProfile signed_volumes(const VolumeProfile& v) {
  CharSumProfile out{v.q, v.n_max, v.entries};
  for (std::size_t n = 1; n < out.entries.size(); n += 2) out.entries[n] = -out.entries[n];
  return out;
}

void oracle(const ThetaClass& cls, const CharacterOptions& opts, CharacterDetails& out) {
  for (int n_max = opts.n_max_start; n_max <= opts.n_max_limit; ++n_max) {
    const int N = n_max + 2;
    const QuadForm4 q = q_form_of(representative(cls, N), cls.kind);
    CharSumProfile prof = char_profile(q, cls.Y, n_max, opts.enumeration);
    TailModel tail;
    try {
      tail = fit_tail(prof);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoGeometricTail || n_max == opts.n_max_limit) throw;
      continue;
    }
    out.n_max = n_max;
    out.continued = eval_at_s0(prof, tail);
    out.profile = std::move(prof);
    out.tail = tail;
    out.prefactor = jacobian_factor(cls, true, N);
    return;
  }
  throw Error(ErrorCode::NoGeometricTail, "no tail model up to n_max = " + std::to_string(opts.n_max_limit));
}

void closed_form(const ThetaClass& cls, CharacterDetails& out) {
  const PrimeContext ctx(cls.p);
  // Largest N <= 10 with p^N below 2^31.
  int N = 0;
  for (std::int64_t m = 1; N < 10 && m * cls.p < (std::int64_t{1} << 31); m *= cls.p) ++N;
  constexpr int n_max = 8;
  const QuadForm4 qg = q_form_of(representative(cls, N), cls.kind);

  int k0 = INT_MAX;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!qg.gram().at(i, j).is_zero()) k0 = std::min(k0, valuation(qg.gram().at(i, j)));
  if (k0 == INT_MAX) throw Error(ErrorCode::ZeroAtPrecision, "the form of the class vanishes");
  ResidueMatrix4 gram(cls.p, N - k0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) gram.set(i, j, qg.gram().at(i, j).shifted_down(k0));
  const QuadForm4 primitive(gram, "content-free form");

  // Q_g / scalar = pi^(k0 - v) unit^-1 primitive
  const Scalar sc = documented_scalar(cls, ctx, N);
  const int shift = k0 - sc.valuation;
  const QPowerValue rescale = signed_power(cls.Y.chi(shift, sc.unit, cls.p), 4 * shift, cls.p);

  CharSumProfile prof;
  if (!cls.Y.ramified()) {
    const auto shape = identify_shape(primitive, ctx);
    if (!shape) throw Error(ErrorCode::ShapeNotInCatalog, "form of the class is not a catalog shape");
    out.shape = *shape;
    out.lemma = lemma_for_shape(*shape);
    prof = signed_volumes(closed_form_volume_profile(*out.lemma, cls.p, n_max));
  } else {
    const bool appendix_data = cls.D == SquareClass(SquareClass::Tag::U) && cls.A == SquareClass(SquareClass::Tag::Pi) &&
                               cls.r.is_one() && (cls.kind == ClassKind::II || cls.kind == ClassKind::RamifiedAppendix);
    if (!appendix_data) throw Error(ErrorCode::UnknownLemma, "ramified closed form covers D = u, A = pi, r = 1 only");
    const auto eq = find_equivalence(canonical_form(FormShapeId::II_3, ctx, N - k0), primitive, ctx);
    if (!eq) throw Error(ErrorCode::UnknownLemma, "ramified closed form covers the II.3 shape only");
    out.shape = FormShapeId::II_3;
    out.lemma = cls.Y.d_class() == SquareClass(SquareClass::Tag::Pi) ? LemmaId::A_1_Pi : LemmaId::A_1_UPi;
    prof = closed_form_char_profile(*out.lemma, cls.p, n_max);
    if (chi_eval(cls.Y, eq->c) < 0)
      for (auto& e : prof.entries) e = -e;
  }
  out.n_max = n_max;
  out.tail = fit_tail(prof);
  out.continued = eval_at_s0(prof, out.tail);
  out.profile = std::move(prof);
  out.prefactor = paper_prefactor(cls, ctx, N) * rescale;
}

}  // namespace

std::string to_string(CharacterMode m) { return m == CharacterMode::Oracle ? "oracle" : "closed_form"; }

CharacterMode parse_mode(std::string_view s) {
  if (s == "oracle") return CharacterMode::Oracle;
  if (s == "closed_form" || s == "closed-form") return CharacterMode::ClosedForm;
  throw Error(ErrorCode::InvalidArgument, "unknown mode '" + std::string(s) + "'");
}

CharacterDetails evaluate_character(const ThetaClass& cls, CharacterMode mode, const CharacterOptions& opts) {
  CharacterDetails out;
  out.mode = mode;
  if (mode == CharacterMode::Oracle)
    oracle(cls, opts, out);
  else
    closed_form(cls, out);
  out.normalization = normalization_constant(cls.Y, cls.p, 0);
  out.result.value = out.prefactor * QPowerValue(out.continued, 0, cls.p) / out.normalization;
  out.result.value = out.result.value.canonical();
  out.result.kind = cls.kind;
  out.result.y_matches_E3 = y_matches_E3(cls);
  out.result.twist_sign = twist_sign(cls);
  return out;
}

CharacterValue twisted_character_value(const ThetaClass& cls, CharacterMode mode, const CharacterOptions& opts) {
  return evaluate_character(cls, mode, opts).result;
}

CharacterValue expected_value(const ThetaClass& cls) {
  CharacterValue v;
  v.kind = cls.kind;
  v.y_matches_E3 = y_matches_E3(cls);
  v.twist_sign = twist_sign(cls);
  const bool vanishing = cls.kind == ClassKind::I || cls.kind == ClassKind::III || !v.y_matches_E3;
  v.value = QPowerValue(vanishing ? 0 : 2, 0, cls.p);
  return v;
}

ThetaClass other_twist(const ThetaClass& cls) {
  ThetaClass t = cls;
  const SquareClass U(SquareClass::Tag::U), Pi(SquareClass::Tag::Pi);
  switch (cls.kind) {
    case ClassKind::II:
      t.r = cls.r.is_one() ? (cls.D == U ? Pi : U) : SquareClass();
      return t;
    case ClassKind::IV:
      t.br4 = cls.br4.is_one() ? (cls.A.odd_valuation() ? U : Pi) : SquareClass();
      return t;
    default:
      throw Error(ErrorCode::WrongKind, "stable sums are taken for types II and IV");
  }
}

QPowerValue stable_class_sum(const ThetaClass& cls, CharacterMode mode, const CharacterOptions& opts) {
  const ThetaClass twin = other_twist(cls);
  const QPowerValue a = twisted_character_value(cls, mode, opts).value.canonical();
  const QPowerValue b = twisted_character_value(twin, mode, opts).value.canonical();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.half_exponent() != b.half_exponent())
    throw Error(ErrorCode::Inconsistent, "twist values are not commensurable");
  return QPowerValue(a.coeff() + b.coeff(), a.half_exponent(), cls.p).canonical();
}

}  // namespace twchar
