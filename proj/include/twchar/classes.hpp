#pragma once

#include "twchar/localfield.hpp"
#include "twchar/quadforms.hpp"
#include "twchar/series.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace twchar {

// x0 + x1 sqrt(c) over R / p^N.
class QuadExtElem {
 public:
  QuadExtElem(ResidueElement x0, ResidueElement x1, ResidueElement c);
  static QuadExtElem of(std::int64_t x0, std::int64_t x1, std::int64_t c, std::uint32_t p, int precision);

  const ResidueElement& x0() const noexcept { return x0_; }
  const ResidueElement& x1() const noexcept { return x1_; }
  const ResidueElement& radicand() const noexcept { return c_; }

  QuadExtElem conj() const;
  ResidueElement norm() const;
  ResidueElement trace() const;
  bool is_zero() const { return x0_.is_zero() && x1_.is_zero(); }

  friend QuadExtElem operator+(const QuadExtElem& a, const QuadExtElem& b);
  friend QuadExtElem operator-(const QuadExtElem& a, const QuadExtElem& b);
  friend QuadExtElem operator*(const QuadExtElem& a, const QuadExtElem& b);
  friend bool operator==(const QuadExtElem& a, const QuadExtElem& b);

 private:
  ResidueElement x0_, x1_, c_;
};

// F(sqrt D, sqrt A) with basis 1, sqrt D, sqrt A, sqrt C where C represents AD mod squares
// and sqrt D sqrt A = lambda sqrt C.  sigma fixes sqrt A, tau fixes sqrt D.
struct BiquadField {
  std::uint32_t p;
  int precision;
  std::int64_t D, A, C, lambda;
};

class BiquadElem {
 public:
  BiquadElem(const BiquadField& f, std::array<std::int64_t, 4> coords);

  const std::array<std::int64_t, 4>& coords() const noexcept { return x_; }
  BiquadElem sigma() const;
  BiquadElem tau() const;
  bool in_E3() const { return x_[1] == 0 && x_[3] == 0; }
  QuadExtElem as_E3() const;  // Inconsistent unless in_E3()

  friend BiquadElem operator+(const BiquadElem& a, const BiquadElem& b);
  friend BiquadElem operator*(const BiquadElem& a, const BiquadElem& b);
  friend bool operator==(const BiquadElem& a, const BiquadElem& b) { return a.x_ == b.x_; }

 private:
  BiquadField f_;
  std::array<std::int64_t, 4> x_;
};

BiquadField make_biquad_field(const PrimeContext& ctx, SquareClass D, SquareClass A, int precision);

enum class ClassKind { I, II, III, IV, RamifiedAppendix };

std::string to_string(ClassKind k);
ClassKind parse_class_kind(std::string_view s);

struct ThetaClass {
  ClassKind kind = ClassKind::I;
  std::uint32_t p = 3;
  SquareClass D{SquareClass::Tag::Pi};  // I, II, III
  SquareClass A{SquareClass::Tag::U};   // II, III, IV
  std::array<std::int64_t, 2> a{1, 1};
  std::array<std::int64_t, 2> b{1, 1};
  std::optional<std::array<std::int64_t, 2>> d;  // IV: D = d1 + d2 sqrt A; default per field
  SquareClass r{};                               // I, II
  SquareClass s{};                               // I, II
  TypeIIITwist br3 = TypeIIITwist::One;          // III
  SquareClass br4{};                             // IV: br in {1, pi} or {1, u}
  CharDescriptor Y{SquareClass(SquareClass::Tag::U)};
};

// Literal residues for D and A.  A is -1 for the type III d+i branch and for type IV with E3
// unramified and p = 3 mod 4.
std::int64_t literal_D(const ThetaClass& cls, const PrimeContext& ctx);
std::int64_t literal_A(const ThetaClass& cls, const PrimeContext& ctx);
std::array<std::int64_t, 2> type_IV_D(const ThetaClass& cls, const PrimeContext& ctx);

// InvalidArgument / NotCyclic / NotThetaRegular on malformed field data, twists or coordinates.
void validate(const ThetaClass& cls, int precision);

ResidueMatrix4 representative(const ThetaClass& cls, int precision);

// sym(g J); types I and II are reordered from (t, z, x, y) to (x, y, z, t).
QuadForm4 q_form_of(const ResidueMatrix4& g, ClassKind kind);

// Q_g = pi^scalar_valuation * form, where form carries the unit part as its prefactor.  The scalar is
// b2 s (I, II), br (IV) or 1 (III); InvalidArgument when it does not divide Q_g.
struct FactoredForm {
  QuadForm4 form;
  int scalar_valuation;
};

FactoredForm factored_form(const ThetaClass& cls, int precision);

// Characteristic polynomials X^2 - trace X + det over E3 of the two C_Y components.
struct CYClass {
  std::array<QuadExtElem, 2> trace;
  std::array<QuadExtElem, 2> det;
  ResidueElement det_F;
};

CYClass norm_map(const ThetaClass& cls, int precision);

// Delta(t theta)/Delta_C(Nt); with at_s0 also times |det g|^{1/2}, the full s = 0 factor in front of
// the integral of the literal form.
QPowerValue jacobian_factor(const ThetaClass& cls, bool at_s0, int precision = 6);

// kappa: -1 exactly on the non-norm twist representative.
int twist_sign(const ThetaClass& cls);
bool y_matches_E3(const ThetaClass& cls);

}  // namespace twchar
