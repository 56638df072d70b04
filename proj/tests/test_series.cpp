#include "doctest.h"

#include "twchar/error.hpp"
#include "twchar/series.hpp"

using namespace twchar;

namespace {

Rational R(std::int64_t a, std::int64_t b = 1) { return Rational(a, b); }

}  // namespace

TEST_CASE("fit_tail on the lemma tables") {
  for (std::uint32_t q : {3u, 5u, 7u}) {
    const Rational Q = q;
    auto i3 = closed_form_volume_profile(LemmaId::I_3, q, 6);
    auto t = fit_tail(i3);
    CHECK(t.n0 == 1);
    CHECK(t.C == (1 - 1 / Q) * (1 + 2 / Q + 1 / (Q * Q)));
    CHECK_FALSE(t.tail_zero);
    CHECK(t.sign == 1);

    auto a1 = closed_form_char_profile(LemmaId::A_1_Pi, q, 4);
    auto ta = fit_tail(a1);
    CHECK(ta.tail_zero);
    CHECK(ta.n0 == 2);

    CharSumProfile zero{q, 3, {0, 0, 0, 0}};
    auto tz = fit_tail(zero);
    CHECK(tz.tail_zero);
    CHECK(tz.n0 == 0);

    CHECK(fit_tail(closed_form_volume_profile(LemmaId::I_2, q, 6)).n0 == 3);
    CHECK(fit_tail(closed_form_volume_profile(LemmaId::II_1, q, 6)).n0 == 2);
    CHECK(fit_tail(closed_form_volume_profile(LemmaId::IV_2, q, 6)).n0 == 1);
    CHECK(fit_tail(closed_form_volume_profile(LemmaId::Anisotropic, q, 4)).tail_zero);
  }
}

TEST_CASE("fit_tail failures") {
  VolumeProfile noisy{3, 4, {R(1), R(1, 2), R(1, 5), R(1, 7), R(1, 11)}};
  try {
    fit_tail(noisy);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoGeometricTail);
  }
  // a single ratio is not enough
  VolumeProfile shortp{3, 2, {R(5), R(1), R(1, 3)}};
  CHECK_THROWS_AS(fit_tail(shortp), Error);
  // one trailing zero is not enough
  VolumeProfile one_zero{3, 2, {R(5), R(1), R(0)}};
  CHECK_THROWS_AS(fit_tail(one_zero), Error);
}

TEST_CASE("alternating tails in unramified character sums") {
  for (std::uint32_t q : {3u, 5u}) {
    auto v = closed_form_volume_profile(LemmaId::II_1, q, 6);
    CharSumProfile c{q, 6, {}};
    for (int n = 0; n <= 6; ++n) c.entries.push_back(n % 2 ? -v.entries[n] : v.entries[n]);
    auto tc = fit_tail(c);
    CHECK(tc.sign == -1);
    CHECK(tc.C == fit_tail(v).C);
    CHECK(eval_at_s0(c, tc) == eval_at_s0(v, fit_tail(v)));
  }
}

TEST_CASE("continuation at s = 0") {
  for (std::uint32_t q : {3u, 5u, 7u}) {
    const Rational Q = q;
    auto at0 = [&](LemmaId id) {
      auto p = closed_form_volume_profile(id, q, 8);
      return eval_at_s0(p, fit_tail(p));
    };
    CHECK(at0(LemmaId::I_1) == 0);
    CHECK(at0(LemmaId::I_2) == 0);
    CHECK(at0(LemmaId::I_3) == 0);
    CHECK(at0(LemmaId::II_1) == -2 * Q * (1 + 1 / (Q * Q)) / (1 + Q));
    CHECK(at0(LemmaId::II_2) == 2 * Q * (1 + 1 / (Q * Q)) / (1 + Q));
    CHECK(at0(LemmaId::II_3) == 0);
    CHECK(at0(LemmaId::II_4) == 0);
    CHECK(at0(LemmaId::II_5) == 0);
    CHECK(at0(LemmaId::IV_2) == 2 * (1 + 1 / (Q * Q)) / (1 + Q));
    // II.1 and II.2 are negatives after the common factor |4 r D sqrt A| = q^-1
    CHECK(at0(LemmaId::II_1) / Q == -(at0(LemmaId::II_2) / Q));
    auto a1 = closed_form_char_profile(LemmaId::A_1_Pi, q, 4);
    CHECK(eval_at_s0(a1, fit_tail(a1)) == -2 / Q);
    auto a1u = closed_form_char_profile(LemmaId::A_1_UPi, q, 4);
    CHECK(eval_at_s0(a1u, fit_tail(a1u)) == 0);
  }
}

TEST_CASE("convergent regime agrees with the tail model") {
  for (std::uint32_t q : {3u, 5u, 7u}) {
    const Rational Q = q;
    for (auto id : {LemmaId::I_1, LemmaId::I_2, LemmaId::I_3, LemmaId::II_1, LemmaId::II_2, LemmaId::II_3,
                    LemmaId::IV_2}) {
      auto p = closed_form_volume_profile(id, q, 7);
      auto t = fit_tail(p);
      for (int m : {0, 1, 2}) {
        const Rational full = eval_at_m(p, t, m);
        const Rational head = partial_sum(p, m, 7);
        CHECK(head + tail_sum(t, -1, q, m, 8) == full);
        // and the truncation error is within C q^-n_max / (1 + 1/q)
        Rational err = full - head;
        if (err < 0) err = -err;
        CHECK(err <= t.C * qpow(q, -7) / (1 + 1 / Q));
      }
    }
    auto i3 = closed_form_volume_profile(LemmaId::I_3, q, 6);
    auto t = fit_tail(i3);
    CHECK(eval_at_m(i3, t, 0) == (1 - 1 / (Q * Q)) - t.C * (1 / Q) / (1 + 1 / Q));
    auto a1 = closed_form_char_profile(LemmaId::A_1_UPi, q, 4);
    CHECK(partial_sum(a1, 0, 4) == a1.entries[0] + a1.entries[1]);
    CHECK(partial_sum(VolumeProfile{q, 2, {0, 0, 0}}, 0, 2) == 0);
  }
  auto p = closed_form_volume_profile(LemmaId::I_3, 3, 4);
  CHECK_THROWS_AS(partial_sum(p, -2, 4), Error);
}

TEST_CASE("normalization constants") {
  CharDescriptor unram(SquareClass(SquareClass::Tag::U));
  CharDescriptor ram(SquareClass(SquareClass::Tag::Pi));
  for (std::uint32_t q : {3u, 5u, 7u}) {
    const Rational Q = q;
    CHECK(normalization_constant(unram, q, 0) == QPowerValue((1 + 1 / (Q * Q)) / (1 + Q), 0, q));
    CHECK(normalization_constant(unram, q, 1) == QPowerValue((1 + qpow(q, -4)) / (1 + 1 / Q), 0, q));
    PrimeContext ctx(q);
    CHECK(normalization_from_shells(ctx, 4, 0) == normalization_constant(unram, q, 0).to_rational());
    CHECK(normalization_from_shells(ctx, 4, 1) == normalization_constant(unram, q, 1).to_rational());
    const int chi_m1 = q % 4 == 1 ? 1 : -1;
    auto ramc = normalization_constant(ram, q);
    CHECK(ramc.half_exponent() == -1);
    CHECK(ramc.coeff() == Rational(chi_m1, q));
  }
  CHECK(normalization_constant(ram, 5) == QPowerValue(1, -3, 5));
}

TEST_CASE("anisotropic value") {
  CHECK(anisotropic_value(3, 0) == 0);
  CHECK(anisotropic_value(3, 1) == 1 + R(1, 3) - R(1, 9) - R(1, 27));
  for (std::uint32_t p : {3u, 5u, 7u}) {
    PrimeContext ctx(p);
    auto h = shell_histogram(canonical_form(FormShapeId::I_Anisotropic, ctx, 4), 2);
    CHECK(anisotropic_value_from_shells(h, 0) == 0);
    CHECK(anisotropic_value_from_shells(h, 1) == anisotropic_value(p, 1));
  }
}

TEST_CASE("QPowerValue arithmetic") {
  for (std::uint32_t q : {3u, 5u}) {
    for (int j = -4; j <= 4; ++j)
      for (int k = -4; k <= 4; ++k) {
        QPowerValue a(R(2, 7), j, q), b(R(-3, 5), k, q);
        auto c = a * b;
        CHECK(c.coeff() == R(-6, 35));
        CHECK(c.half_exponent() == j + k);
        CHECK((c / b) == a);
        if ((j + k) % 2 == 0) CHECK(c.to_rational() == R(-6, 35) * qpow(q, (j + k) / 2));
        else CHECK_THROWS_AS(c.to_rational(), Error);
      }
    CHECK(QPowerValue(1, 2, q) == QPowerValue(q, 0, q));
    CHECK(QPowerValue(Rational(1, q), 1, q) == QPowerValue(1, -1, q));
    CHECK_FALSE(QPowerValue(1, 1, q) == QPowerValue(1, 0, q));
    CHECK(QPowerValue(0, 3, q) == QPowerValue(0, 0, q));
    CHECK(QPowerValue(-2, 0, q).abs() == QPowerValue(2, 0, q));
    CHECK(to_string(QPowerValue(R(1, 5), -1, q)) == "1/5*q^(-1/2)");
  }
}
