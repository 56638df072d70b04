#include "twchar/cli.hpp"

#include "twchar/error.hpp"
#include "twchar/json_io.hpp"
#include "twchar/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace twchar {

int desk_budget(std::uint32_t p) {
  if (p == 3) return 4;
  if (p == 5) return 3;
  return 2;
}

namespace {

struct Common {
  std::uint32_t p = 0;
  int n_max = -1;
  unsigned threads = 1;
  std::string kernel = "auto";
  std::string method = "auto";
  bool json = false;
  std::string cls;
  std::string y;
  std::string shape;
  std::string mode = "oracle";
};

EnumerationOptions enumeration(const Common& c) {
  return {parse_method(c.method), parse_kernel(c.kernel), std::max(1u, c.threads)};
}

int budgeted_n_max(const Common& c) {
  const int n = c.n_max < 0 ? desk_budget(c.p) : c.n_max;
  if (n < 1 || n > desk_budget(c.p))
    throw Error(ErrorCode::InvalidArgument, "n_max " + std::to_string(n) + " outside the budget 1.." +
                                                std::to_string(desk_budget(c.p)) + " at p = " + std::to_string(c.p));
  return n;
}

ThetaClass load_class(const Common& c) {
  ThetaClass cls = class_from_string(c.cls);
  if (c.p != 0 && c.p != cls.p)
    throw Error(ErrorCode::InvalidArgument, "--prime " + std::to_string(c.p) + " disagrees with the class p");
  if (!c.y.empty()) cls.Y = CharDescriptor::parse(c.y);
  return cls;
}

std::string value_text(const QPowerValue& v) { return to_string(v.canonical()); }

void print_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

void failure_record(std::ostream& err, const std::string& identity, const std::string& detail) {
  err << Json{{"failure", {{"identity", identity}, {"detail", detail}}}}.dump() << '\n';
}

int cmd_verify(const Common& c, std::ostream& out, std::ostream& err) {
  const int n_max = budgeted_n_max(c);
  const std::vector<Identity> ids = verify_lemmas(c.p, n_max, enumeration(c));
  const auto passed = std::count_if(ids.begin(), ids.end(), [](const Identity& i) { return i.pass; });
  if (c.json) {
    Json list = Json::array();
    for (const Identity& i : ids) {
      Json e{{"name", i.name}, {"pass", i.pass}};
      if (!i.pass) e["detail"] = i.detail;
      list.push_back(std::move(e));
    }
    print_json(out, Json{{"command", "verify-lemmas"},
                         {"p", c.p},
                         {"n_max", n_max},
                         {"identities", std::move(list)},
                         {"passed", passed},
                         {"total", ids.size()}});
  } else {
    for (const Identity& i : ids) {
      out << (i.pass ? "PASS  " : "FAIL  ") << i.name;
      if (!i.pass) out << "  (" << i.detail << ")";
      out << '\n';
    }
    out << passed << "/" << ids.size() << " identities hold at p = " << c.p << ", n_max = " << n_max << '\n';
  }
  for (const Identity& i : ids)
    if (!i.pass) {
      failure_record(err, i.name, i.detail);
      return kExitMismatch;
    }
  return kExitOk;
}

void print_report(std::ostream& out, const CharacterReport& r) {
  const CharacterDetails& d = r.details;
  auto row = [&](const std::string& k, const std::string& v) { out << std::left << std::setw(15) << k << v << '\n'; };
  row("class", describe(r.cls));
  row("mode", to_string(d.mode));
  row("n_max", std::to_string(d.n_max));
  if (d.shape) row("shape", to_string(*d.shape));
  if (d.lemma) row("lemma", to_string(*d.lemma));
  std::string prof;
  for (const Rational& e : d.profile.entries) prof += (prof.empty() ? "" : ", ") + to_string(e);
  row("profile", "[" + prof + "]");
  row("tail", d.tail.tail_zero ? "zero from n=" + std::to_string(d.tail.n0)
                               : to_string(d.tail.C) + " * (" + std::to_string(d.tail.sign) + "/q)^n from n=" +
                                     std::to_string(d.tail.n0));
  row("continued", to_string(d.continued));
  row("prefactor", value_text(d.prefactor));
  row("normalization", value_text(d.normalization));
  row("value", value_text(d.result.value));
  row("expected", "|" + value_text(r.expected.value) + "|");
  row("delta(Y,E3)", r.expected.y_matches_E3 ? "1" : "0");
  row("twist_sign", std::to_string(d.result.twist_sign));
  row("pass", r.pass() ? "yes" : "no");
}

int cmd_char(const Common& c, std::ostream& out, std::ostream& err) {
  const ThetaClass cls = load_class(c);
  CharacterOptions opts;
  opts.enumeration = enumeration(c);
  if (opts.enumeration.method == EnumerationMethod::Auto) opts.enumeration.method = EnumerationMethod::Pruned;
  if (c.n_max > 0) opts.n_max_start = c.n_max;
  const CharacterReport r = make_report(cls, evaluate_character(cls, parse_mode(c.mode), opts));
  if (c.json)
    print_json(out, report_to_json(r));
  else
    print_report(out, r);
  if (!r.pass()) {
    failure_record(err, "theorem " + describe(cls), value_text(r.details.result.value));
    return kExitMismatch;
  }
  return kExitOk;
}

int cmd_volumes(const Common& c, std::ostream& out, std::ostream&) {
  const int n_max = budgeted_n_max(c);
  const PrimeContext ctx(c.p);
  const FormShapeId shape = parse_shape(c.shape);
  const QuadForm4 q = canonical_form(shape, ctx, n_max + 2);
  std::vector<Rational> entries;
  Json j;
  if (c.y.empty()) {
    const VolumeProfile v = vol_profile(q, n_max, enumeration(c));
    entries = v.entries;
    j = profile_to_json(v);
  } else {
    const CharSumProfile v = char_profile(q, CharDescriptor::parse(c.y), n_max, enumeration(c));
    entries = v.entries;
    j = profile_to_json(v);
  }
  if (c.json) {
    print_json(out, j);
  } else {
    out << (c.y.empty() ? "volumes of " : "character sums (Y=" + c.y + ") of ") << to_string(shape) << " at p = " << c.p
        << '\n';
    for (std::size_t n = 0; n < entries.size(); ++n) out << std::setw(3) << n << "  " << to_string(entries[n]) << '\n';
  }
  return kExitOk;
}

int cmd_norm(const Common& c, std::ostream& out, std::ostream&) {
  const ThetaClass cls = load_class(c);
  const CYClass cy = norm_map(cls, 6);
  if (c.json) {
    print_json(out, Json{{"class", class_to_json(cls)}, {"norm", cy_class_to_json(cy)}});
    return kExitOk;
  }
  auto ext = [](const QuadExtElem& e) {
    return std::to_string(e.x0().value()) + " + " + std::to_string(e.x1().value()) + " sqrt(" +
           std::to_string(e.radicand().value()) + ")";
  };
  out << "class  " << describe(cls) << "  (mod p^6)\n";
  for (int i = 0; i < 2; ++i)
    out << "component " << i << "  trace " << ext(cy.trace[i]) << "  det " << ext(cy.det[i]) << '\n';
  out << "det over F  " << cy.det_F.value() << '\n';
  return kExitOk;
}

int cmd_report_all(const Common& c, std::ostream& out, std::ostream& err) {
  CharacterOptions opts;
  opts.enumeration.kernel = parse_kernel(c.kernel);
  const std::vector<MatrixRow> rows = report_all(c.p, opts, std::max(1u, c.threads));
  if (c.json) {
    Json list = Json::array();
    for (const MatrixRow& r : rows) {
      Json e{{"oracle", report_to_json(r.oracle)}};
      e["closed_form"] = r.closed ? report_to_json(*r.closed) : Json(nullptr);
      if (!r.closed) e["closed_form_note"] = r.closed_note;
      e["modes_agree"] = r.modes_agree;
      e["pass"] = r.pass();
      list.push_back(std::move(e));
    }
    print_json(out, Json{{"command", "report-all"}, {"p", c.p}, {"rows", std::move(list)}});
  } else {
    out << std::left << std::setw(42) << "class" << std::setw(10) << "oracle" << std::setw(20) << "closed form"
        << std::setw(10) << "expected" << "pass\n";
    for (const MatrixRow& r : rows) {
      out << std::setw(42) << describe(r.cls) << std::setw(10) << value_text(r.oracle.details.result.value)
          << std::setw(20) << (r.closed ? value_text(r.closed->details.result.value) : "n/a (" + r.closed_note + ")")
          << std::setw(10) << "|" + value_text(r.oracle.expected.value) + "|" << (r.pass() ? "yes" : "no") << '\n';
    }
  }
  for (const MatrixRow& r : rows)
    if (!r.pass()) {
      failure_record(err, "theorem " + describe(r.cls), value_text(r.oracle.details.result.value));
      return kExitMismatch;
    }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Twisted characters of theta-elliptic classes in GL(4) over p-adic fields", "twchar"};
  app.require_subcommand(1);
  Common c;

  auto add_prime = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--prime,-p", c.p, "odd prime");
    if (required) o->required();
  };
  auto add_enum = [&](CLI::App* s) {
    s->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1u, 256u));
    s->add_option("--kernel", c.kernel, "shell kernel: auto, scalar, avx2");
    s->add_option("--method", c.method, "enumeration: auto, flat, pruned");
  };

  auto* verify = app.add_subcommand("verify-lemmas", "check every lemma table and theorem value at p");
  add_prime(verify, true);
  verify->add_option("--nmax", c.n_max, "deepest shell");
  add_enum(verify);

  auto* chr = app.add_subcommand("char", "evaluate the twisted character at one class");
  add_prime(chr, false);
  chr->add_option("--class", c.cls, "class descriptor (JSON)")->required();
  chr->add_option("--Y", c.y, "quadratic extension: u, pi, upi");
  chr->add_option("--mode", c.mode, "oracle or closed_form");
  chr->add_option("--nmax", c.n_max, "first n_max tried by the oracle");
  add_enum(chr);

  auto* vol = app.add_subcommand("volumes", "shell volumes of a catalog shape");
  add_prime(vol, true);
  vol->add_option("--shape", c.shape, "catalog shape, e.g. II.3")->required();
  vol->add_option("--nmax", c.n_max, "deepest shell");
  vol->add_option("--Y", c.y, "character sums of chi_Y instead of volumes");
  add_enum(vol);

  auto* norm = app.add_subcommand("norm", "norm map of a type II or IV class");
  add_prime(norm, false);
  norm->add_option("--class", c.cls, "class descriptor (JSON)")->required();

  auto* all = app.add_subcommand("report-all", "every kind, twist and Y at p");
  add_prime(all, true);
  add_enum(all);

  for (auto* s : {verify, chr, vol, norm, all}) s->add_flag("--json", c.json, "machine-readable output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c.p != 0) PrimeContext check(c.p);
    if (*verify) return cmd_verify(c, out, err);
    if (*chr) return cmd_char(c, out, err);
    if (*vol) return cmd_volumes(c, out, err);
    if (*norm) return cmd_norm(c, out, err);
    return cmd_report_all(c, out, err);
  } catch (const Error& e) {
    err << Json{{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}}.dump() << '\n';
    return kExitUsage;
  }
}

}  // namespace twchar
