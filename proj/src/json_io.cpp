#include "twchar/json_io.hpp"

#include "twchar/error.hpp"

namespace twchar {

namespace {

Error bad(const std::string& what) { return Error(ErrorCode::InvalidArgument, "json: " + what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string str_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw bad(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::array<std::int64_t, 2> pair_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
    throw bad(std::string("field '") + key + "' must be a pair of integers");
  return {v[0].get<std::int64_t>(), v[1].get<std::int64_t>()};
}

}  // namespace

Json rational_to_json(const Rational& r) {
  return Json{{"num", numerator_string(r)}, {"den", denominator_string(r)}};
}

Rational rational_from_json(const Json& j) { return rational_from_strings(str_field(j, "num"), str_field(j, "den")); }

Json qpower_to_json(const QPowerValue& v) {
  Json j = rational_to_json(v.coeff());
  j["half_exponent"] = v.half_exponent();
  j["q"] = v.q();
  return j;
}

QPowerValue qpower_from_json(const Json& j) {
  return QPowerValue(rational_from_json(j), field(j, "half_exponent").get<int>(), field(j, "q").get<std::uint32_t>());
}

template <class Tag>
Json profile_to_json(const ShellProfile<Tag>& profile) {
  Json entries = Json::array();
  for (std::size_t n = 0; n < profile.entries.size(); ++n) {
    Json e{{"n", n}};
    e.update(rational_to_json(profile.entries[n]));
    entries.push_back(std::move(e));
  }
  return Json{{"q", profile.q}, {"n_max", profile.n_max}, {"entries", std::move(entries)}};
}

template <class Tag>
ShellProfile<Tag> profile_from_json(const Json& j) {
  ShellProfile<Tag> out;
  out.q = field(j, "q").get<std::uint32_t>();
  out.n_max = field(j, "n_max").get<int>();
  const Json& entries = field(j, "entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(out.n_max) + 1)
    throw bad("profile needs n_max + 1 entries");
  out.entries.resize(entries.size());
  std::vector<bool> seen(entries.size(), false);
  for (const Json& e : entries) {
    const int n = field(e, "n").get<int>();
    if (n < 0 || n > out.n_max || seen[n]) throw bad("profile entry index out of range or repeated");
    seen[n] = true;
    out.entries[n] = rational_from_json(e);
  }
  return out;
}

template Json profile_to_json(const VolumeProfile&);
template Json profile_to_json(const CharSumProfile&);
template VolumeProfile profile_from_json<VolumeTag>(const Json&);
template CharSumProfile profile_from_json<CharSumTag>(const Json&);

Json tail_to_json(const TailModel& t) {
  return Json{{"n0", t.n0}, {"C", rational_to_json(t.C)}, {"sign", t.sign}, {"tail_zero", t.tail_zero}};
}

TailModel tail_from_json(const Json& j) {
  TailModel t;
  t.n0 = field(j, "n0").get<int>();
  t.C = rational_from_json(field(j, "C"));
  t.sign = field(j, "sign").get<int>();
  t.tail_zero = field(j, "tail_zero").get<bool>();
  return t;
}

TypeIIITwist parse_type_III_twist(std::string_view s) {
  if (s == "1") return TypeIIITwist::One;
  if (s == "sqrtA") return TypeIIITwist::SqrtA;
  if (s == "d+i") return TypeIIITwist::DPlusI;
  throw Error(ErrorCode::InvalidArgument, "unknown type III twist '" + std::string(s) + "'");
}

Json class_to_json(const ThetaClass& cls) {
  Json j{{"kind", to_string(cls.kind)}, {"p", cls.p}};
  if (cls.kind != ClassKind::IV) j["D"] = to_string(cls.D);
  if (cls.kind != ClassKind::I) j["A"] = to_string(cls.A);
  j["a"] = cls.a;
  j["b"] = cls.b;
  if (cls.d) j["d"] = *cls.d;
  switch (cls.kind) {
    case ClassKind::I:
    case ClassKind::II:
    case ClassKind::RamifiedAppendix: j["twist"] = Json{{"r", to_string(cls.r)}, {"s", to_string(cls.s)}}; break;
    case ClassKind::III: j["twist"] = Json{{"br", to_string(cls.br3)}}; break;
    case ClassKind::IV: j["twist"] = Json{{"br", to_string(cls.br4)}}; break;
  }
  j["Y"] = to_string(cls.Y);
  return j;
}

ThetaClass class_from_json(const Json& j) {
  if (!j.is_object()) throw bad("class descriptor must be an object");
  ThetaClass c;
  c.kind = parse_class_kind(str_field(j, "kind"));
  const Json& p = field(j, "p");
  if (!p.is_number_integer() || p.get<std::int64_t>() < 3 || p.get<std::int64_t>() > 46337 || p.get<std::int64_t>() % 2 == 0)
    throw bad("p must be an odd prime");
  c.p = p.get<std::uint32_t>();
  PrimeContext ctx(c.p);  // rejects composites
  if (j.contains("D")) c.D = SquareClass::parse(str_field(j, "D"));
  if (j.contains("A")) c.A = SquareClass::parse(str_field(j, "A"));
  if (j.contains("a")) c.a = pair_field(j, "a");
  if (j.contains("b")) c.b = pair_field(j, "b");
  if (j.contains("d")) c.d = pair_field(j, "d");
  if (j.contains("twist")) {
    const Json& t = j.at("twist");
    if (c.kind == ClassKind::III) {
      if (t.contains("br")) c.br3 = parse_type_III_twist(str_field(t, "br"));
    } else if (c.kind == ClassKind::IV) {
      if (t.contains("br")) c.br4 = SquareClass::parse(str_field(t, "br"));
    } else {
      if (t.contains("r")) c.r = SquareClass::parse(str_field(t, "r"));
      if (t.contains("s")) c.s = SquareClass::parse(str_field(t, "s"));
    }
  }
  if (j.contains("Y")) c.Y = CharDescriptor::parse(str_field(j, "Y"));
  return c;
}

ThetaClass class_from_string(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw bad(e.what());
  }
  return class_from_json(j);
}

namespace {

Json residue_to_json(const ResidueElement& x) { return Json{{"value", x.value()}, {"precision", x.precision()}}; }

Json ext_to_json(const QuadExtElem& e) {
  return Json{{"x0", e.x0().value()}, {"x1", e.x1().value()}, {"radicand", e.radicand().value()}};
}

}  // namespace

Json cy_class_to_json(const CYClass& c) {
  Json comps = Json::array();
  for (int i = 0; i < 2; ++i) comps.push_back(Json{{"trace", ext_to_json(c.trace[i])}, {"det", ext_to_json(c.det[i])}});
  return Json{{"components", std::move(comps)}, {"det_F", residue_to_json(c.det_F)}};
}

CharacterReport make_report(const ThetaClass& cls, const CharacterDetails& details) {
  CharacterReport r;
  r.cls = cls;
  r.details = details;
  r.expected = expected_value(cls);
  const CharacterValue& v = details.result;
  r.pass_magnitude = v.value.abs().canonical() == r.expected.value.canonical();
  r.pass_delta = v.value.is_zero() == r.expected.value.is_zero() && v.y_matches_E3 == r.expected.y_matches_E3;
  const QPowerValue c = v.value.canonical();
  if (v.kind == ClassKind::I || v.kind == ClassKind::III)
    r.pass_invariant = c.is_zero();
  else if (v.y_matches_E3)
    r.pass_invariant = c.coeff() * c.coeff() == 4 && c.half_exponent() == 0;
  else
    r.pass_invariant = true;
  return r;
}

Json report_to_json(const CharacterReport& r) {
  const CharacterDetails& d = r.details;
  Json j{{"class", class_to_json(r.cls)}, {"mode", to_string(d.mode)}, {"n_max", d.n_max}};
  if (d.shape) j["shape"] = to_string(*d.shape);
  if (d.lemma) j["lemma"] = to_string(*d.lemma);
  j["profile"] = profile_to_json(d.profile);
  j["tail"] = tail_to_json(d.tail);
  j["continued"] = rational_to_json(d.continued);
  j["prefactor"] = qpower_to_json(d.prefactor);
  j["normalization"] = qpower_to_json(d.normalization);
  j["value"] = qpower_to_json(d.result.value);
  j["kind"] = to_string(d.result.kind);
  j["y_matches_E3"] = d.result.y_matches_E3;
  j["twist_sign"] = d.result.twist_sign;
  j["expected"] = Json{{"magnitude", qpower_to_json(r.expected.value)}, {"delta", r.expected.y_matches_E3}};
  j["pass"] = Json{{"magnitude", r.pass_magnitude}, {"delta", r.pass_delta}, {"invariant", r.pass_invariant}};
  return j;
}

CharacterReport report_from_json(const Json& j) {
  CharacterReport r;
  r.cls = class_from_json(field(j, "class"));
  CharacterDetails& d = r.details;
  d.mode = parse_mode(str_field(j, "mode"));
  d.n_max = field(j, "n_max").get<int>();
  if (j.contains("shape")) d.shape = parse_shape(str_field(j, "shape"));
  if (j.contains("lemma")) d.lemma = parse_lemma(str_field(j, "lemma"));
  d.profile = profile_from_json<CharSumTag>(field(j, "profile"));
  d.tail = tail_from_json(field(j, "tail"));
  d.continued = rational_from_json(field(j, "continued"));
  d.prefactor = qpower_from_json(field(j, "prefactor"));
  d.normalization = qpower_from_json(field(j, "normalization"));
  d.result.value = qpower_from_json(field(j, "value"));
  d.result.kind = parse_class_kind(str_field(j, "kind"));
  d.result.y_matches_E3 = field(j, "y_matches_E3").get<bool>();
  d.result.twist_sign = field(j, "twist_sign").get<int>();
  const Json& e = field(j, "expected");
  r.expected.value = qpower_from_json(field(e, "magnitude"));
  r.expected.y_matches_E3 = field(e, "delta").get<bool>();
  r.expected.kind = d.result.kind;
  r.expected.twist_sign = d.result.twist_sign;
  const Json& p = field(j, "pass");
  r.pass_magnitude = field(p, "magnitude").get<bool>();
  r.pass_delta = field(p, "delta").get<bool>();
  r.pass_invariant = field(p, "invariant").get<bool>();
  return r;
}

}  // namespace twchar
