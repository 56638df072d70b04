#include "twchar/verify.hpp"

#include "twchar/error.hpp"

#include <atomic>
#include <thread>

namespace twchar {

namespace {

using Tag = SquareClass::Tag;

SquareClass sc(Tag t) { return SquareClass(t); }

const std::array<Tag, 3> kNontrivial{Tag::U, Tag::Pi, Tag::UPi};

// F^x / N(E^x) for E = F(sqrt D)
std::array<Tag, 2> norm_cosets(SquareClass D) {
  if (D == sc(Tag::U)) return {Tag::One, Tag::Pi};
  return {Tag::One, Tag::U};
}

ThetaClass base(ClassKind kind, std::uint32_t p) {
  ThetaClass c;
  c.kind = kind;
  c.p = p;
  switch (kind) {
    case ClassKind::III:
      c.a = {1, 1};
      c.b = {2, 1};
      break;
    case ClassKind::IV:
      c.a = {1, 2};
      c.b = {1, 1};
      break;
    default:
      c.a = {1, 1};
      c.b = {1, static_cast<std::int64_t>(p) - 1};
  }
  return c;
}

Identity compare(std::string name, const Rational& lhs, const Rational& rhs) {
  Identity id{std::move(name), lhs == rhs, {}};
  if (!id.pass) id.detail = to_string(lhs) + " vs " + to_string(rhs);
  return id;
}

template <class Tag>
Identity compare_profiles(std::string name, const ShellProfile<Tag>& lhs, const ShellProfile<Tag>& rhs) {
  Identity id{std::move(name), lhs == rhs, {}};
  for (std::size_t n = 0; !id.pass && n < std::min(lhs.entries.size(), rhs.entries.size()); ++n)
    if (lhs.entries[n] != rhs.entries[n]) {
      id.detail = "n=" + std::to_string(n) + ": " + to_string(lhs.entries[n]) + " vs " + to_string(rhs.entries[n]);
      break;
    }
  return id;
}

}  // namespace

Rational displayed_continuation(LemmaId id, std::uint32_t q) {
  const Rational Q = q;
  const Rational c = (1 + 1 / (Q * Q)) / (1 + Q);
  switch (id) {
    case LemmaId::I_1:
    case LemmaId::I_2:
    case LemmaId::I_3:
    case LemmaId::II_3:
    case LemmaId::II_4:
    case LemmaId::II_5:
    case LemmaId::A_1_UPi: return 0;
    case LemmaId::II_1: return -2 * Q * c;
    case LemmaId::II_2: return 2 * Q * c;
    case LemmaId::IV_2: return 2 * c;
    case LemmaId::A_1_Pi: return -2 / Q;
    default: break;
  }
  throw Error(ErrorCode::UnknownLemma, "no displayed continuation for " + to_string(id));
}

std::string describe(const ThetaClass& cls) {
  std::string s = to_string(cls.kind);
  if (cls.kind != ClassKind::IV) s += " D=" + to_string(cls.D);
  if (cls.kind != ClassKind::I) s += " A=" + to_string(cls.A);
  switch (cls.kind) {
    case ClassKind::III: s += " br=" + to_string(cls.br3); break;
    case ClassKind::IV: s += " br=" + to_string(cls.br4); break;
    default: s += " r=" + to_string(cls.r) + " s=" + to_string(cls.s);
  }
  return s + " Y=" + to_string(cls.Y);
}

std::vector<ThetaClass> class_matrix(std::uint32_t p) {
  const PrimeContext ctx(p);
  std::vector<ThetaClass> out;
  auto push_all_Y = [&](ThetaClass c) {
    for (Tag y : kNontrivial) {
      c.Y = CharDescriptor(sc(y));
      out.push_back(c);
    }
  };
  for (Tag D : kNontrivial)
    for (Tag r : norm_cosets(sc(D)))
      for (Tag s : norm_cosets(sc(D))) {
        ThetaClass c = base(ClassKind::I, p);
        c.D = sc(D);
        c.r = sc(r);
        c.s = sc(s);
        push_all_Y(c);
      }
  for (Tag D : kNontrivial)
    for (Tag A : kNontrivial) {
      if (D == A) continue;
      for (Tag r : norm_cosets(sc(D))) {
        ThetaClass c = base(ClassKind::II, p);
        c.D = sc(D);
        c.A = sc(A);
        c.r = sc(r);
        push_all_Y(c);
      }
    }
  std::vector<std::tuple<Tag, Tag, TypeIIITwist>> iii{{Tag::Pi, Tag::U, TypeIIITwist::One},
                                                       {Tag::U, Tag::Pi, TypeIIITwist::One},
                                                       {Tag::U, Tag::Pi, TypeIIITwist::SqrtA},
                                                       {Tag::U, Tag::UPi, TypeIIITwist::SqrtA}};
  if (ctx.minus_one_is_square()) {
    iii.emplace_back(Tag::Pi, Tag::U, TypeIIITwist::SqrtA);
  } else {
    iii.emplace_back(Tag::Pi, Tag::U, TypeIIITwist::DPlusI);
    iii.emplace_back(Tag::UPi, Tag::U, TypeIIITwist::DPlusI);
  }
  for (auto [D, A, br] : iii) {
    ThetaClass c = base(ClassKind::III, p);
    c.D = sc(D);
    c.A = sc(A);
    c.br3 = br;
    push_all_Y(c);
  }
  for (Tag A : kNontrivial) {
    ThetaClass c = base(ClassKind::IV, p);
    c.A = sc(A);
    try {
      validate(c, 4);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NotCyclic) continue;
      throw;
    }
    for (Tag br : {Tag::One, sc(A).odd_valuation() ? Tag::U : Tag::Pi}) {
      c.br4 = sc(br);
      push_all_Y(c);
    }
  }
  if (p % 4 == 1) {
    ThetaClass c = base(ClassKind::RamifiedAppendix, p);
    c.D = sc(Tag::U);
    c.A = sc(Tag::Pi);
    for (Tag y : {Tag::Pi, Tag::UPi}) {
      c.Y = CharDescriptor(sc(y));
      out.push_back(c);
    }
  }
  return out;
}

MatrixRow evaluate_row(const ThetaClass& cls, const CharacterOptions& opts) {
  MatrixRow row{cls, make_report(cls, evaluate_character(cls, CharacterMode::Oracle, opts)), std::nullopt, {}, true};
  try {
    row.closed = make_report(cls, evaluate_character(cls, CharacterMode::ClosedForm, opts));
    row.modes_agree = row.closed->details.result.value.canonical() == row.oracle.details.result.value.canonical();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ShapeNotInCatalog && e.code() != ErrorCode::UnknownLemma) throw;
    row.closed_note = std::string(to_string(e.code()));
  }
  return row;
}

std::vector<MatrixRow> report_all(std::uint32_t p, const CharacterOptions& opts, unsigned threads) {
  const std::vector<ThetaClass> classes = class_matrix(p);
  std::vector<std::optional<MatrixRow>> rows(classes.size());
  std::vector<std::exception_ptr> errors(classes.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < classes.size();) {
      try {
        rows[i] = evaluate_row(classes[i], opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, threads); ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  std::vector<MatrixRow> out;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*rows[i]));
  }
  return out;
}

std::vector<Identity> verify_lemmas(std::uint32_t p, int n_max, const EnumerationOptions& opts) {
  const PrimeContext ctx(p);
  std::vector<Identity> out;
  const CharDescriptor y_pi(sc(Tag::Pi)), y_upi(sc(Tag::UPi)), y_u(sc(Tag::U));

  for (int n = 1; n <= n_max; ++n)
    for (std::int64_t c : {1, 2, 3}) {
      if (c % p == 0) continue;
      const std::string at = " c=" + std::to_string(c) + " n=" + std::to_string(n);
      out.push_back(compare("I.0" + at, shell_integral(c, n, std::nullopt, ctx, opts.kernel),
                            shell_integral_closed_form(p, n, std::nullopt)));
      out.push_back(compare("A.0" + at, shell_integral(c, n, y_pi, ctx, opts.kernel), 0));
    }

  for (FormShapeId s : all_shapes()) {
    LemmaId id;
    try {
      id = lemma_for_shape(s);
    } catch (const Error&) {
      continue;
    }
    if (id == LemmaId::Anisotropic) continue;
    const QuadForm4 q = canonical_form(s, ctx, n_max + 2);
    out.push_back(compare_profiles("volumes " + to_string(s) + " = " + to_string(id), vol_profile(q, n_max, opts),
                                   closed_form_volume_profile(id, p, n_max)));
  }

  const ShellHistogram h = shell_histogram(canonical_form(FormShapeId::I_Anisotropic, ctx, n_max + 2), n_max, opts);
  for (int s : {0, 1})
    out.push_back(compare("anisotropic s=" + std::to_string(s), anisotropic_value_from_shells(h, s),
                          anisotropic_value(p, s)));

  for (LemmaId id : {LemmaId::I_1, LemmaId::I_2, LemmaId::I_3, LemmaId::II_1, LemmaId::II_2, LemmaId::II_3,
                     LemmaId::II_4, LemmaId::II_5, LemmaId::IV_2}) {
    const VolumeProfile prof = closed_form_volume_profile(id, p, 8);
    out.push_back(compare("continuation " + to_string(id), eval_at_s0(prof, fit_tail(prof)),
                          displayed_continuation(id, p)));
  }

  out.push_back(compare("normalization", normalization_from_shells(ctx, n_max, 0, opts.kernel),
                        normalization_constant(y_u, p, 0).to_rational()));

  if (p % 4 == 1) {
    const QuadForm4 q = canonical_form(FormShapeId::II_3, ctx, n_max + 2);
    for (auto [y, id] : {std::pair{y_pi, LemmaId::A_1_Pi}, std::pair{y_upi, LemmaId::A_1_UPi}}) {
      out.push_back(compare_profiles("char sums " + to_string(id), char_profile(q, y, n_max, opts),
                                     closed_form_char_profile(id, p, n_max)));
      const CharSumProfile cf = closed_form_char_profile(id, p, 8);
      out.push_back(compare("continuation " + to_string(id), eval_at_s0(cf, fit_tail(cf)),
                            displayed_continuation(id, p)));
    }
  }

  CharacterOptions copts;
  copts.enumeration.kernel = opts.kernel;
  for (const MatrixRow& row : report_all(p, copts, opts.threads)) {
    const CharacterValue& v = row.oracle.details.result;
    Identity id{"theorem " + describe(row.cls), row.pass(), {}};
    if (!id.pass)
      id.detail = to_string(v.value) + " vs expected |" + to_string(row.oracle.expected.value) + "|" +
                  (row.modes_agree ? "" : ", closed form " + to_string(row.closed->details.result.value));
    out.push_back(std::move(id));
  }

  for (const ThetaClass& c : class_matrix(p)) {
    const bool first_twist = c.kind == ClassKind::II ? c.r.is_one() : c.kind == ClassKind::IV && c.br4.is_one();
    if (!first_twist) continue;
    out.push_back(compare("stable sum " + describe(c), stable_class_sum(c).canonical().coeff(), 0));
  }
  return out;
}

}  // namespace twchar
