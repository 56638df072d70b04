#pragma once

#include "twchar/localfield.hpp"

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twchar {

// 4x4 matrix over R / p^N, entries stored reduced in [0, p^N).
class ResidueMatrix4 {
 public:
  ResidueMatrix4(std::uint32_t p, int precision);
  static ResidueMatrix4 identity(std::uint32_t p, int precision);
  static ResidueMatrix4 from_rows(std::uint32_t p, int precision,
                                  const std::array<std::array<std::int64_t, 4>, 4>& rows);

  std::uint32_t prime() const noexcept { return p_; }
  int precision() const noexcept { return precision_; }
  std::int64_t modulus() const noexcept { return modulus_; }

  std::int64_t raw(int i, int j) const noexcept { return m_[4 * i + j]; }
  ResidueElement at(int i, int j) const { return ResidueElement(p_, precision_, m_[4 * i + j]); }
  void set(int i, int j, std::int64_t v);
  void set(int i, int j, const ResidueElement& v);

  ResidueMatrix4 transpose() const;
  ResidueMatrix4 reduced(int precision) const;
  ResidueMatrix4 scaled(const ResidueElement& c) const;
  ResidueElement det() const;
  ResidueMatrix4 inverse() const;  // SingularChangeOfBasis unless det is a unit
  bool is_symmetric() const;

  friend ResidueMatrix4 operator*(const ResidueMatrix4& a, const ResidueMatrix4& b);
  friend bool operator==(const ResidueMatrix4& a, const ResidueMatrix4& b);

 private:
  std::uint32_t p_;
  int precision_;
  std::int64_t modulus_;
  std::array<std::int64_t, 16> m_{};
};

// Q(v) = unit_prefactor * v^T gram v, variables ordered (x, y, z, t).
class QuadForm4 {
 public:
  struct Monomial {
    int i;
    int j;
    std::int64_t coeff;  // coefficient of x_i x_j in the polynomial
  };

  QuadForm4(ResidueMatrix4 gram, std::string label = {});
  QuadForm4(ResidueMatrix4 gram, ResidueElement unit_prefactor, std::string label);

  static QuadForm4 from_monomials(std::uint32_t p, int precision, std::initializer_list<Monomial> terms,
                                  std::string label = {});
  static QuadForm4 diagonal(std::uint32_t p, int precision, const std::array<std::int64_t, 4>& d,
                            std::string label = {});

  std::uint32_t prime() const noexcept { return gram_.prime(); }
  int precision() const noexcept { return gram_.precision(); }
  const ResidueMatrix4& gram() const noexcept { return gram_; }
  const ResidueElement& unit_prefactor() const noexcept { return prefactor_; }
  const std::string& label() const noexcept { return label_; }

  // prefactor * gram as a plain form.
  QuadForm4 literal() const;
  QuadForm4 scaled(const ResidueElement& c) const;
  QuadForm4 reduced(int precision) const;
  // Q'(v) = Q(M v).
  QuadForm4 composed(const ResidueMatrix4& m) const;
  // Writes Q as c * Q' with c a unit; Q' carries c as its prefactor.
  QuadForm4 factor_out(const ResidueElement& c) const;

  ResidueElement evaluate(const std::array<std::int64_t, 4>& v) const;

 private:
  ResidueMatrix4 gram_;
  ResidueElement prefactor_;
  std::string label_;
};

enum class FormShapeId {
  I_1,
  I_2,
  I_3,
  I_Anisotropic,
  II_1,
  II_2,
  II_3,
  II_3b,
  II_4,
  II_5,
  IV_Unramified,
  IV_Ramified,
  III_Hyperbolic,
  III_SqrtA,
  III_DPlusI,
};

std::string to_string(FormShapeId id);
FormShapeId parse_shape(std::string_view s);
const std::vector<FormShapeId>& all_shapes();

QuadForm4 canonical_form(FormShapeId shape, const PrimeContext& ctx, int precision);

struct JordanEntry {
  int valuation;
  std::int64_t unit;  // known mod p^(N - valuation), stored lifted
};

// basis^T * gram * basis = diag(pi^k_i * e_i) mod p^N, with det(basis) a unit.
struct Diagonalization {
  ResidueMatrix4 basis;
  std::array<JordanEntry, 4> diag;
};

Diagonalization diagonalize(const QuadForm4& q);

struct JordanBlock {
  int scale;
  int rank;
  int det_legendre;
  friend bool operator==(const JordanBlock&, const JordanBlock&) = default;
};

// Complete GL4(R) invariant for p odd.
std::vector<JordanBlock> jordan_invariants(const QuadForm4& q);

bool is_isotropic_hasse(const QuadForm4& q);
// true/false when certified by a primitive-zero search to level max_level; nullopt if undecided.
std::optional<bool> is_isotropic_search(const QuadForm4& q, int max_level = 4);
bool is_isotropic(const QuadForm4& q);

bool verify_equivalence(const QuadForm4& q1, const QuadForm4& q2, const ResidueMatrix4& m,
                        const ResidueElement& c);

struct Equivalence {
  ResidueMatrix4 m;
  ResidueElement c;
};

// Explicit (M, c) with to(v) = c * from(M v), c drawn from {1, u}.
std::optional<Equivalence> find_equivalence(const QuadForm4& from, const QuadForm4& to,
                                            const PrimeContext& ctx);

// Catalog shape equivalent to q up to a unit scalar; IV_Ramified and III shapes are never returned.
std::optional<FormShapeId> identify_shape(const QuadForm4& q, const PrimeContext& ctx);

enum class TypeIIITwist { One, SqrtA, DPlusI };

std::string to_string(TypeIIITwist br);

struct TypeIIIReduction {
  FormShapeId source_shape;
  QuadForm4 source;
  QuadForm4 target;
  FormShapeId target_shape;
  ResidueMatrix4 m;  // source(v) = c * target(M v)
  ResidueElement c;
};

// D = pi.  DPlusI needs p = 3 mod 4.
TypeIIIReduction type_III_reduction(TypeIIITwist br, const PrimeContext& ctx, int precision);

}  // namespace twchar
