#pragma once

#include "twchar/character.hpp"
#include "twchar/json_io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twchar {

struct Identity {
  std::string name;
  bool pass = false;
  std::string detail;  // "lhs vs rhs" on failure
};

// The displayed s = 0 value of each lemma's series.
Rational displayed_continuation(LemmaId id, std::uint32_t q);

std::string describe(const ThetaClass& cls);

// Sample classes of every kind, twist and Y at p, skipping field data the kind cannot carry.
std::vector<ThetaClass> class_matrix(std::uint32_t p);

struct MatrixRow {
  ThetaClass cls;
  CharacterReport oracle;
  std::optional<CharacterReport> closed;  // empty when the class has no closed form
  std::string closed_note;
  bool modes_agree = true;

  bool pass() const { return oracle.pass() && modes_agree; }
};

MatrixRow evaluate_row(const ThetaClass& cls, const CharacterOptions& opts = {});

// Rows in class_matrix order, evaluated on `threads` workers.
std::vector<MatrixRow> report_all(std::uint32_t p, const CharacterOptions& opts = {}, unsigned threads = 1);

// Lemma tables, continuations, normalization and theorem values at p, in a fixed order.
std::vector<Identity> verify_lemmas(std::uint32_t p, int n_max, const EnumerationOptions& opts = {});

}  // namespace twchar
