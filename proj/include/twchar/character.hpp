#pragma once

#include "twchar/classes.hpp"
#include "twchar/series.hpp"
#include "twchar/volumes.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace twchar {

enum class CharacterMode { Oracle, ClosedForm };

std::string to_string(CharacterMode m);
CharacterMode parse_mode(std::string_view s);

struct CharacterOptions {
  EnumerationOptions enumeration{EnumerationMethod::Pruned, KernelKind::Auto, 1};
  // The oracle raises n_max from n_max_start until the shells admit a tail model.
  int n_max_start = 4;
  int n_max_limit = 10;
};

struct CharacterValue {
  QPowerValue value;
  ClassKind kind = ClassKind::I;
  bool y_matches_E3 = false;
  int twist_sign = 1;
};

struct CharacterDetails {
  CharacterValue result;
  CharacterMode mode = CharacterMode::Oracle;
  int n_max = 0;
  CharSumProfile profile;  // oracle: the literal form; closed form: the identified lemma
  TailModel tail;
  Rational continued = 0;  // eval_at_s0 of profile
  QPowerValue prefactor;
  QPowerValue normalization;
  std::optional<FormShapeId> shape;
  std::optional<LemmaId> lemma;
};

CharacterDetails evaluate_character(const ThetaClass& cls, CharacterMode mode, const CharacterOptions& opts = {});
CharacterValue twisted_character_value(const ThetaClass& cls, CharacterMode mode, const CharacterOptions& opts = {});

// 0 for I and III; magnitude 2 delta(Y, E3) for II, IV and the appendix case.
CharacterValue expected_value(const ThetaClass& cls);

// The class with the other twist representative (r for II, br for IV).
ThetaClass other_twist(const ThetaClass& cls);

// WrongKind unless II, IV or the appendix case.
QPowerValue stable_class_sum(const ThetaClass& cls, CharacterMode mode = CharacterMode::Oracle,
                             const CharacterOptions& opts = {});

}  // namespace twchar
