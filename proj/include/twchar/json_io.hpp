#pragma once

#include "twchar/character.hpp"
#include "twchar/classes.hpp"
#include "twchar/series.hpp"
#include "twchar/volumes.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace twchar {

using Json = nlohmann::ordered_json;

Json rational_to_json(const Rational& r);  // {"num", "den"}
Rational rational_from_json(const Json& j);

// {"num", "den", "half_exponent", "q"}: coeff * q^(half_exponent/2)
Json qpower_to_json(const QPowerValue& v);
QPowerValue qpower_from_json(const Json& j);

// {"q", "n_max", "entries": [{"n", "num", "den"}]}
template <class Tag>
Json profile_to_json(const ShellProfile<Tag>& profile);
template <class Tag>
ShellProfile<Tag> profile_from_json(const Json& j);

Json tail_to_json(const TailModel& t);
TailModel tail_from_json(const Json& j);

TypeIIITwist parse_type_III_twist(std::string_view s);

// {"kind", "p", "D", "A", "a", "b", "twist", "Y"}; twist is {"r", "s"} for I and II and
// {"br"} for III and IV.  IV may carry "d": [d1, d2].
Json class_to_json(const ThetaClass& cls);
ThetaClass class_from_json(const Json& j);
ThetaClass class_from_string(std::string_view text);

Json cy_class_to_json(const CYClass& c);

struct CharacterReport {
  ThetaClass cls;
  CharacterDetails details;
  CharacterValue expected;
  bool pass_magnitude = false;
  bool pass_delta = false;
  bool pass_invariant = false;

  bool pass() const { return pass_magnitude && pass_delta && pass_invariant; }
};

CharacterReport make_report(const ThetaClass& cls, const CharacterDetails& details);
Json report_to_json(const CharacterReport& r);
CharacterReport report_from_json(const Json& j);

}  // namespace twchar
