#include "twchar/quadforms.hpp"

#include "twchar/error.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <utility>

namespace twchar {

namespace {

std::int64_t md(std::int64_t v, std::int64_t m) {
  v %= m;
  return v < 0 ? v + m : v;
}

std::int64_t mulm(std::int64_t a, std::int64_t b, std::int64_t m) { return md(md(a, m) * md(b, m), m); }

std::int64_t invm(std::int64_t a, std::uint32_t p, int prec) {
  return ResidueElement(p, prec, a).inverse().value();
}

int val_mod(std::int64_t v, std::uint32_t p, int prec) {
  v = md(v, prime_power(p, prec));
  if (v == 0) return prec;
  int k = 0;
  while (v % p == 0) {
    v /= p;
    ++k;
  }
  return k;
}

// Dense n x n matrix over Z / m, used by the diagonalization and matching routines.
struct DynMat {
  int n = 0;
  std::vector<std::int64_t> a;
  explicit DynMat(int n_) : n(n_), a(static_cast<std::size_t>(n_ * n_), 0) {}
  std::int64_t& operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
  std::int64_t operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
  static DynMat identity(int n) {
    DynMat r(n);
    for (int i = 0; i < n; ++i) r(i, i) = 1;
    return r;
  }
};

DynMat mul(const DynMat& x, const DynMat& y, std::int64_t m) {
  DynMat r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      if (x(i, k) == 0) continue;
      for (int j = 0; j < x.n; ++j) r(i, j) = md(r(i, j) + mulm(x(i, k), y(k, j), m), m);
    }
  return r;
}

// col_j += f * col_s as a congruence on g, tracked in b.
void add_column(DynMat& g, DynMat& b, int j, int s, std::int64_t f, std::int64_t m) {
  const int n = g.n;
  for (int r = 0; r < n; ++r) g(r, j) = md(g(r, j) + mulm(f, g(r, s), m), m);
  for (int c = 0; c < n; ++c) g(j, c) = md(g(j, c) + mulm(f, g(s, c), m), m);
  for (int r = 0; r < n; ++r) b(r, j) = md(b(r, j) + mulm(f, b(r, s), m), m);
}

void swap_index(DynMat& g, DynMat& b, int i, int j) {
  if (i == j) return;
  for (int r = 0; r < g.n; ++r) std::swap(g(r, i), g(r, j));
  for (int c = 0; c < g.n; ++c) std::swap(g(i, c), g(j, c));
  for (int r = 0; r < b.n; ++r) std::swap(b(r, i), b(r, j));
}

// Symmetric g mod p^prec to diagonal form; b^T g_in b = diag.
std::vector<JordanEntry> diagonalize_dyn(DynMat g, std::uint32_t p, int prec, DynMat& b) {
  const std::int64_t m = prime_power(p, prec);
  const int n = g.n;
  b = DynMat::identity(n);
  std::vector<JordanEntry> out;
  for (int s = 0; s < n; ++s) {
    int best = prec, bi = -1, bj = -1;
    for (int i = s; i < n; ++i)
      for (int j = i; j < n; ++j) {
        int v = val_mod(g(i, j), p, prec);
        if (v < best || (v == best && i == j && bi != bj)) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0 || best >= prec)
      throw Error(ErrorCode::PrecisionTooLow, "form is degenerate at working precision");
    if (bi != bj) {
      bool diag_found = false;
      for (int i = s; i < n; ++i)
        if (val_mod(g(i, i), p, prec) == best) {
          bi = bj = i;
          diag_found = true;
          break;
        }
      if (!diag_found) {
        add_column(g, b, bi, bj, 1, m);
        bj = bi;
      }
    }
    swap_index(g, b, s, bi);
    const int k = best;
    const std::int64_t pk = prime_power(p, k);
    const std::int64_t e = g(s, s) / pk;
    const std::int64_t einv = invm(e, p, prec - k);
    for (int j = s + 1; j < n; ++j) {
      const std::int64_t sj = g(s, j) / pk;
      if (g(s, j) == 0) continue;
      add_column(g, b, j, s, md(-mulm(sj, einv, m), m), m);
    }
    for (int j = s + 1; j < n; ++j)
      if (g(s, j) != 0 || g(j, s) != 0) throw Error(ErrorCode::Inconsistent, "elimination failed");
    out.push_back({k, md(e, prime_power(p, prec - k))});
  }
  return out;
}

DynMat to_dyn(const ResidueMatrix4& x) {
  DynMat r(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = x.raw(i, j);
  return r;
}

ResidueMatrix4 from_dyn(const DynMat& x, std::uint32_t p, int prec) {
  ResidueMatrix4 r(p, prec);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.set(i, j, x(i, j));
  return r;
}

// X with X^T diag(e) X = diag(f) mod p^prec, all entries units.
std::optional<DynMat> match_unimodular(const std::vector<std::int64_t>& e, const std::vector<std::int64_t>& f,
                                       std::uint32_t p, int prec) {
  const int r = static_cast<int>(e.size());
  const std::int64_t m = prime_power(p, prec);
  if (r == 1) {
    auto s = unit_sqrt(ResidueElement(p, prec, mulm(f[0], invm(e[0], p, prec), m)));
    if (!s) return std::nullopt;
    DynMat x(1);
    x(0, 0) = s->value();
    return x;
  }
  std::vector<std::int64_t> x(static_cast<std::size_t>(r), 0);
  bool found = false;
  for (std::int64_t a = 0; a < p && !found; ++a)
    for (std::int64_t bb = 0; bb < p && !found; ++bb) {
      if (a == 0 && bb == 0) continue;
      if (md(e[0] * a * a + e[1] * bb * bb - f[0], p) == 0) {
        x[0] = a;
        x[1] = bb;
        found = true;
      }
    }
  if (!found) return std::nullopt;
  const int i0 = x[0] % p != 0 ? 0 : 1;
  auto form = [&](const std::vector<std::int64_t>& y, const std::vector<std::int64_t>& z) {
    std::int64_t s = 0;
    for (int i = 0; i < r; ++i) s = md(s + mulm(e[i], mulm(y[i], z[i], m), m), m);
    return s;
  };
  for (int it = 0; it <= prec; ++it) {
    std::int64_t err = md(form(x, x) - f[0], m);
    if (err == 0) break;
    std::int64_t d = mulm(2 * e[i0] % m, x[i0], m);
    x[i0] = md(x[i0] - mulm(err, invm(d, p, prec), m), m);
  }
  if (md(form(x, x) - f[0], m) != 0) return std::nullopt;

  std::vector<std::vector<std::int64_t>> cols{x};
  for (int j = 0; j < r; ++j) {
    if (j == i0) continue;
    std::vector<std::int64_t> c(static_cast<std::size_t>(r), 0);
    c[j] = 1;
    const std::int64_t coef = mulm(form(c, x), invm(f[0], p, prec), m);
    for (int i = 0; i < r; ++i) c[i] = md(c[i] - mulm(coef, x[i], m), m);
    cols.push_back(std::move(c));
  }
  DynMat w(r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < r; ++i) w(i, j) = cols[j][i];

  DynMat rest(r - 1);
  for (int a = 0; a < r - 1; ++a)
    for (int bcol = 0; bcol < r - 1; ++bcol) rest(a, bcol) = form(cols[a + 1], cols[bcol + 1]);
  DynMat bprime(r - 1);
  auto diag = diagonalize_dyn(rest, p, prec, bprime);
  std::vector<std::int64_t> e2;
  for (const auto& d : diag) {
    if (d.valuation != 0) return std::nullopt;
    e2.push_back(d.unit);
  }
  auto sub = match_unimodular(e2, std::vector<std::int64_t>(f.begin() + 1, f.end()), p, prec);
  if (!sub) return std::nullopt;
  DynMat inner = mul(bprime, *sub, m);
  DynMat blk(r);
  blk(0, 0) = 1;
  for (int i = 0; i < r - 1; ++i)
    for (int j = 0; j < r - 1; ++j) blk(i + 1, j + 1) = inner(i, j);
  return mul(w, blk, m);
}

}  // namespace

ResidueMatrix4::ResidueMatrix4(std::uint32_t p, int precision)
    : p_(p), precision_(precision), modulus_(prime_power(p, precision)) {
  if (precision < 1) throw Error(ErrorCode::InvalidArgument, "precision must be >= 1");
}

ResidueMatrix4 ResidueMatrix4::identity(std::uint32_t p, int precision) {
  ResidueMatrix4 r(p, precision);
  for (int i = 0; i < 4; ++i) r.set(i, i, 1);
  return r;
}

ResidueMatrix4 ResidueMatrix4::from_rows(std::uint32_t p, int precision,
                                         const std::array<std::array<std::int64_t, 4>, 4>& rows) {
  ResidueMatrix4 r(p, precision);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.set(i, j, rows[i][j]);
  return r;
}

void ResidueMatrix4::set(int i, int j, std::int64_t v) { m_[4 * i + j] = md(v, modulus_); }

void ResidueMatrix4::set(int i, int j, const ResidueElement& v) {
  if (v.prime() != p_) throw Error(ErrorCode::InvalidArgument, "mixed primes");
  if (v.precision() < precision_) throw Error(ErrorCode::InsufficientPrecision, "entry below matrix precision");
  set(i, j, v.value());
}

ResidueMatrix4 ResidueMatrix4::transpose() const {
  ResidueMatrix4 r(p_, precision_);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.m_[4 * j + i] = m_[4 * i + j];
  return r;
}

ResidueMatrix4 ResidueMatrix4::reduced(int precision) const {
  if (precision > precision_) throw Error(ErrorCode::InsufficientPrecision, "cannot raise precision");
  ResidueMatrix4 r(p_, precision);
  for (int k = 0; k < 16; ++k) r.m_[k] = m_[k] % r.modulus_;
  return r;
}

ResidueMatrix4 ResidueMatrix4::scaled(const ResidueElement& c) const {
  int n = std::min(precision_, c.precision());
  ResidueMatrix4 r = reduced(n);
  for (auto& v : r.m_) v = mulm(v, c.value(), r.modulus_);
  return r;
}

ResidueElement ResidueMatrix4::det() const {
  DynMat g = to_dyn(*this);
  const std::int64_t m = modulus_;
  // Laplace expansion over permutations; 24 terms.
  std::array<int, 4> perm{0, 1, 2, 3};
  std::int64_t total = 0;
  do {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (perm[i] > perm[j]) ++inv;
    std::int64_t term = 1;
    for (int i = 0; i < 4; ++i) term = mulm(term, g(i, perm[i]), m);
    total = md(total + (inv % 2 ? -term : term), m);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return ResidueElement(p_, precision_, total);
}

ResidueMatrix4 ResidueMatrix4::inverse() const {
  if (!det().is_unit()) throw Error(ErrorCode::SingularChangeOfBasis, "determinant is not a unit");
  const std::int64_t m = modulus_;
  std::array<std::array<std::int64_t, 8>, 4> a{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a[i][j] = m_[4 * i + j];
    a[i][4 + i] = 1;
  }
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    while (a[piv][c] % p_ == 0) ++piv;
    std::swap(a[piv], a[c]);
    std::int64_t inv = invm(a[c][c], p_, precision_);
    for (auto& v : a[c]) v = mulm(v, inv, m);
    for (int r = 0; r < 4; ++r) {
      if (r == c || a[r][c] == 0) continue;
      std::int64_t f = a[r][c];
      for (int k = 0; k < 8; ++k) a[r][k] = md(a[r][k] - mulm(f, a[c][k], m), m);
    }
  }
  ResidueMatrix4 r(p_, precision_);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.m_[4 * i + j] = a[i][4 + j];
  return r;
}

bool ResidueMatrix4::is_symmetric() const {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (m_[4 * i + j] != m_[4 * j + i]) return false;
  return true;
}

ResidueMatrix4 operator*(const ResidueMatrix4& a, const ResidueMatrix4& b) {
  if (a.p_ != b.p_) throw Error(ErrorCode::InvalidArgument, "mixed primes");
  int n = std::min(a.precision_, b.precision_);
  ResidueMatrix4 x = a.reduced(n), y = b.reduced(n), r(a.p_, n);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      std::int64_t s = 0;
      for (int k = 0; k < 4; ++k) s = md(s + mulm(x.m_[4 * i + k], y.m_[4 * k + j], r.modulus_), r.modulus_);
      r.m_[4 * i + j] = s;
    }
  return r;
}

bool operator==(const ResidueMatrix4& a, const ResidueMatrix4& b) {
  if (a.p_ != b.p_) return false;
  int n = std::min(a.precision_, b.precision_);
  return a.reduced(n).m_ == b.reduced(n).m_;
}

QuadForm4::QuadForm4(ResidueMatrix4 gram, std::string label)
    : QuadForm4(gram, ResidueElement(gram.prime(), gram.precision(), 1), std::move(label)) {}

QuadForm4::QuadForm4(ResidueMatrix4 gram, ResidueElement unit_prefactor, std::string label)
    : gram_(std::move(gram)), prefactor_(std::move(unit_prefactor)), label_(std::move(label)) {
  if (!gram_.is_symmetric()) throw Error(ErrorCode::InvalidArgument, "Gram matrix is not symmetric");
  if (!prefactor_.is_unit()) throw Error(ErrorCode::NotAUnit, "prefactor must be a unit");
  if (prefactor_.prime() != gram_.prime()) throw Error(ErrorCode::InvalidArgument, "mixed primes");
}

QuadForm4 QuadForm4::from_monomials(std::uint32_t p, int precision, std::initializer_list<Monomial> terms,
                                    std::string label) {
  ResidueMatrix4 g(p, precision);
  const std::int64_t m = g.modulus();
  const std::int64_t half = invm(2, p, precision);
  for (const auto& t : terms) {
    if (t.i == t.j) {
      g.set(t.i, t.i, g.raw(t.i, t.i) + t.coeff);
    } else {
      std::int64_t h = mulm(t.coeff, half, m);
      g.set(t.i, t.j, g.raw(t.i, t.j) + h);
      g.set(t.j, t.i, g.raw(t.j, t.i) + h);
    }
  }
  return QuadForm4(g, std::move(label));
}

QuadForm4 QuadForm4::diagonal(std::uint32_t p, int precision, const std::array<std::int64_t, 4>& d,
                              std::string label) {
  ResidueMatrix4 g(p, precision);
  for (int i = 0; i < 4; ++i) g.set(i, i, d[i]);
  return QuadForm4(g, std::move(label));
}

QuadForm4 QuadForm4::literal() const { return QuadForm4(gram_.scaled(prefactor_), label_); }

QuadForm4 QuadForm4::scaled(const ResidueElement& c) const {
  return QuadForm4(gram_.scaled(prefactor_).scaled(c), label_);
}

QuadForm4 QuadForm4::reduced(int precision) const {
  return QuadForm4(gram_.reduced(precision), prefactor_.reduced(precision), label_);
}

QuadForm4 QuadForm4::composed(const ResidueMatrix4& m) const {
  return QuadForm4(m.transpose() * gram_ * m, prefactor_, label_);
}

QuadForm4 QuadForm4::factor_out(const ResidueElement& c) const {
  ResidueMatrix4 g = gram_.scaled(prefactor_).scaled(c.inverse());
  return QuadForm4(g, c.reduced(g.precision()), label_);
}

ResidueElement QuadForm4::evaluate(const std::array<std::int64_t, 4>& v) const {
  const std::int64_t m = gram_.modulus();
  std::int64_t s = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s = md(s + mulm(gram_.raw(i, j), mulm(v[i], v[j], m), m), m);
  return ResidueElement(prime(), precision(), mulm(s, prefactor_.value(), m));
}

std::string to_string(FormShapeId id) {
  switch (id) {
    case FormShapeId::I_1: return "I.1";
    case FormShapeId::I_2: return "I.2";
    case FormShapeId::I_3: return "I.3";
    case FormShapeId::I_Anisotropic: return "I-anisotropic";
    case FormShapeId::II_1: return "II.1";
    case FormShapeId::II_2: return "II.2";
    case FormShapeId::II_3: return "II.3";
    case FormShapeId::II_3b: return "II.3b";
    case FormShapeId::II_4: return "II.4";
    case FormShapeId::II_5: return "II.5";
    case FormShapeId::IV_Unramified: return "IV-unramified";
    case FormShapeId::IV_Ramified: return "IV-ramified";
    case FormShapeId::III_Hyperbolic: return "III-hyperbolic";
    case FormShapeId::III_SqrtA: return "III-sqrtA";
    case FormShapeId::III_DPlusI: return "III-d+i";
  }
  return "?";
}

const std::vector<FormShapeId>& all_shapes() {
  static const std::vector<FormShapeId> shapes{
      FormShapeId::I_1,           FormShapeId::I_2,         FormShapeId::I_3,
      FormShapeId::I_Anisotropic, FormShapeId::II_1,        FormShapeId::II_2,
      FormShapeId::II_3,          FormShapeId::II_3b,       FormShapeId::II_4,
      FormShapeId::II_5,          FormShapeId::IV_Unramified, FormShapeId::IV_Ramified,
      FormShapeId::III_Hyperbolic, FormShapeId::III_SqrtA,  FormShapeId::III_DPlusI};
  return shapes;
}

FormShapeId parse_shape(std::string_view s) {
  for (auto id : all_shapes())
    if (to_string(id) == s) return id;
  if (s == "IV.2") return FormShapeId::IV_Unramified;
  throw Error(ErrorCode::ShapeNotInCatalog, "unknown shape '" + std::string(s) + "'");
}

QuadForm4 canonical_form(FormShapeId shape, const PrimeContext& ctx, int precision) {
  if (precision < 2) throw Error(ErrorCode::PrecisionTooLow, "canonical forms need N >= 2");
  const std::uint32_t p = ctx.p();
  const std::int64_t u = ctx.u(), pi = p;
  const std::string label = to_string(shape);
  auto diag = [&](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    return QuadForm4::diagonal(p, precision, {a, b, c, d}, label);
  };
  switch (shape) {
    case FormShapeId::I_1: return diag(1, -1, -pi, pi);
    case FormShapeId::I_2: return diag(1, pi, -pi, -pi * pi);
    case FormShapeId::I_3: return diag(1, -1, -u, u);
    case FormShapeId::I_Anisotropic: return diag(1, -u, -pi, u * pi);
    case FormShapeId::II_1: return diag(1, -1, -u * pi, pi);
    case FormShapeId::II_2: return diag(1, -u, -u * pi, u * pi);
    case FormShapeId::II_3: return diag(1, -1, -u * pi, u);
    case FormShapeId::II_3b: return diag(1, -1, -u, pi);
    case FormShapeId::II_4: return diag(1, -pi, -u * pi, u * pi);
    case FormShapeId::II_5: return diag(1, -u, -u, u * pi);
    case FormShapeId::IV_Unramified:
      return QuadForm4::from_monomials(p, precision, {{0, 0, 1}, {1, 1, -u}, {2, 3, -2}}, label);
    case FormShapeId::IV_Ramified:
      return QuadForm4::from_monomials(p, precision, {{0, 0, 1}, {1, 1, pi}, {2, 3, -2}}, label);
    case FormShapeId::III_Hyperbolic:
      return QuadForm4::from_monomials(p, precision, {{2, 3, 1}, {0, 1, -pi}}, label);
    case FormShapeId::III_SqrtA: return diag(-u * pi, -pi, u, 1);
    case FormShapeId::III_DPlusI: {
      if (!ctx.d()) throw Error(ErrorCode::MinusOneIsSquare, "d+i branch needs p = 3 mod 4");
      const std::int64_t d = *ctx.d();
      return QuadForm4::from_monomials(
          p, precision, {{3, 3, 1}, {2, 2, -1}, {1, 1, -pi}, {0, 0, pi}, {2, 3, 2 * d}, {0, 1, -2 * d * pi}},
          label);
    }
  }
  throw Error(ErrorCode::ShapeNotInCatalog, "unhandled shape");
}

Diagonalization diagonalize(const QuadForm4& q) {
  const QuadForm4 lit = q.literal();
  DynMat b(4);
  auto entries = diagonalize_dyn(to_dyn(lit.gram()), q.prime(), q.precision(), b);
  Diagonalization d{from_dyn(b, q.prime(), q.precision()), {}};
  std::copy(entries.begin(), entries.end(), d.diag.begin());
  return d;
}

std::vector<JordanBlock> jordan_invariants(const QuadForm4& q) {
  std::map<int, JordanBlock> blocks;
  for (const auto& e : diagonalize(q).diag) {
    auto [it, fresh] = blocks.try_emplace(e.valuation, JordanBlock{e.valuation, 0, 1});
    it->second.rank += 1;
    it->second.det_legendre *= legendre(e.unit, q.prime());
  }
  std::vector<JordanBlock> out;
  for (const auto& [k, b] : blocks) out.push_back(b);
  return out;
}

bool is_isotropic_hasse(const QuadForm4& q) {
  const auto d = diagonalize(q).diag;
  const std::uint32_t p = q.prime();
  int val_sum = 0, leg = 1;
  for (const auto& e : d) {
    val_sum += e.valuation;
    leg *= legendre(e.unit, p);
  }
  const bool det_square = val_sum % 2 == 0 && leg == 1;
  int hasse = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      hasse *= hilbert_symbol(d[i].valuation, d[i].unit, d[j].valuation, d[j].unit, p);
  // Quaternary: anisotropic iff d is a square and the Hasse invariant is -(-1,-1) = -1.
  return !(det_square && hasse == -1);
}

std::optional<bool> is_isotropic_search(const QuadForm4& q, int max_level) {
  const QuadForm4 lit = q.literal();
  const std::uint32_t p = q.prime();
  const int levels = std::min(max_level, q.precision());
  const std::int64_t m = lit.gram().modulus();
  const auto& g = lit.gram();
  auto qval = [&](const std::array<std::int64_t, 4>& w) { return lit.evaluate(w).value(); };

  std::function<int(std::array<std::int64_t, 4>&, int, int)> dfs = [&](std::array<std::int64_t, 4>& w, int k,
                                                                      int pivot) -> int {
    int e = k;
    for (int j = 0; j < 4; ++j) {
      if (j == pivot) continue;
      std::int64_t s = 0;
      for (int l = 0; l < 4; ++l) s = md(s + mulm(g.raw(j, l), w[l], m), m);
      e = std::min(e, val_mod(2 * s, p, k));
    }
    if (2 * e + 1 <= k) return 1;
    if (k >= levels) return -1;
    const std::int64_t pk = prime_power(p, k);
    const std::int64_t pk1 = pk * p;
    bool undecided = false;
    std::array<int, 3> free{};
    for (int j = 0, c = 0; j < 4; ++j)
      if (j != pivot) free[c++] = j;
    const std::array<std::int64_t, 4> base = w;
    for (std::int64_t a = 0; a < p; ++a)
      for (std::int64_t b = 0; b < p; ++b)
        for (std::int64_t c = 0; c < p; ++c) {
          std::array<std::int64_t, 4> child = base;
          child[free[0]] += a * pk;
          child[free[1]] += b * pk;
          child[free[2]] += c * pk;
          if (qval(child) % pk1 != 0) continue;
          int r = dfs(child, k + 1, pivot);
          if (r == 1) return 1;
          if (r == -1) undecided = true;
        }
    return undecided ? -1 : 0;
  };

  bool undecided = false;
  for (int pivot = 0; pivot < 4; ++pivot) {
    const int free_after = 3 - pivot;
    std::int64_t count = 1;
    for (int i = 0; i < free_after; ++i) count *= p;
    for (std::int64_t idx = 0; idx < count; ++idx) {
      std::array<std::int64_t, 4> w{0, 0, 0, 0};
      w[pivot] = 1;
      std::int64_t t = idx;
      for (int j = pivot + 1; j < 4; ++j) {
        w[j] = t % p;
        t /= p;
      }
      if (qval(w) % p != 0) continue;
      int r = dfs(w, 1, pivot);
      if (r == 1) return true;
      if (r == -1) undecided = true;
    }
  }
  if (undecided) return std::nullopt;
  return false;
}

bool is_isotropic(const QuadForm4& q) {
  const bool hasse = is_isotropic_hasse(q);
  auto search = is_isotropic_search(q);
  if (search && *search != hasse)
    throw Error(ErrorCode::Inconsistent, "Hasse invariant and zero search disagree on " + q.label());
  return hasse;
}

bool verify_equivalence(const QuadForm4& q1, const QuadForm4& q2, const ResidueMatrix4& m,
                        const ResidueElement& c) {
  const int n = std::min({q1.precision(), q2.precision(), m.precision(), c.precision()});
  if (!m.reduced(n).det().is_unit()) throw Error(ErrorCode::SingularChangeOfBasis, "det(M) is not a unit");
  if (!c.is_unit()) throw Error(ErrorCode::NotAUnit, "scalar c must be a unit");
  const QuadForm4 lhs = q1.literal().reduced(n).composed(m.reduced(n)).scaled(c.reduced(n));
  return lhs.gram() == q2.literal().reduced(n).gram();
}

std::optional<Equivalence> find_equivalence(const QuadForm4& from, const QuadForm4& to,
                                            const PrimeContext& ctx) {
  const std::uint32_t p = ctx.p();
  const int n = std::min(from.precision(), to.precision());
  const QuadForm4 target = to.literal().reduced(n);
  const auto inv_to = jordan_invariants(target);
  for (std::int64_t cval : {std::int64_t{1}, ctx.u()}) {
    const ResidueElement c(p, n, cval);
    const QuadForm4 src = from.literal().reduced(n).scaled(c);
    if (jordan_invariants(src) != inv_to) continue;
    const Diagonalization d1 = diagonalize(src), d2 = diagonalize(target);
    ResidueMatrix4 t(p, n);
    bool ok = true;
    for (const auto& blk : inv_to) {
      std::vector<int> i1, i2;
      std::vector<std::int64_t> e, f;
      const int prec = n - blk.scale;
      const std::int64_t mk = prime_power(p, prec);
      for (int i = 0; i < 4; ++i) {
        if (d1.diag[i].valuation == blk.scale) {
          i1.push_back(i);
          e.push_back(d1.diag[i].unit % mk);
        }
        if (d2.diag[i].valuation == blk.scale) {
          i2.push_back(i);
          f.push_back(d2.diag[i].unit % mk);
        }
      }
      auto x = match_unimodular(e, f, p, prec);
      if (!x) {
        ok = false;
        break;
      }
      for (std::size_t a = 0; a < i1.size(); ++a)
        for (std::size_t b = 0; b < i2.size(); ++b) t.set(i1[a], i2[b], (*x)(static_cast<int>(a), static_cast<int>(b)));
    }
    if (!ok) continue;
    const ResidueMatrix4 m = d1.basis * t * d2.basis.inverse();
    if (verify_equivalence(from.reduced(n), target, m, c)) return Equivalence{m, c};
  }
  return std::nullopt;
}

std::optional<FormShapeId> identify_shape(const QuadForm4& q, const PrimeContext& ctx) {
  static const FormShapeId candidates[] = {
      FormShapeId::I_1,  FormShapeId::I_2,  FormShapeId::I_3,   FormShapeId::I_Anisotropic,
      FormShapeId::II_1, FormShapeId::II_2, FormShapeId::II_3,  FormShapeId::II_3b,
      FormShapeId::II_4, FormShapeId::II_5, FormShapeId::IV_Unramified};
  const auto inv = jordan_invariants(q);
  for (auto id : candidates) {
    const QuadForm4 shape = canonical_form(id, ctx, q.precision());
    for (std::int64_t c : {std::int64_t{1}, ctx.u()})
      if (jordan_invariants(shape.scaled(ResidueElement(ctx.p(), q.precision(), c))) == inv) return id;
  }
  return std::nullopt;
}

std::string to_string(TypeIIITwist br) {
  switch (br) {
    case TypeIIITwist::One: return "1";
    case TypeIIITwist::SqrtA: return "sqrtA";
    case TypeIIITwist::DPlusI: return "d+i";
  }
  return "?";
}

TypeIIIReduction type_III_reduction(TypeIIITwist br, const PrimeContext& ctx, int precision) {
  const std::uint32_t p = ctx.p();
  const std::int64_t pi = p, u = ctx.u();
  auto rows = [&](std::array<std::array<std::int64_t, 4>, 4> r) { return ResidueMatrix4::from_rows(p, precision, r); };
  switch (br) {
    case TypeIIITwist::One: {
      // zt - pi xy = 1/4 ((z+t)^2 - (z-t)^2 - pi (x+y)^2 + pi (x-y)^2)
      QuadForm4 source = canonical_form(FormShapeId::III_Hyperbolic, ctx, precision);
      QuadForm4 target = canonical_form(FormShapeId::I_1, ctx, precision);
      auto m = rows({{{0, 0, 1, 1}, {0, 0, 1, -1}, {1, 1, 0, 0}, {1, -1, 0, 0}}});
      return {FormShapeId::III_Hyperbolic, source, target, FormShapeId::I_1, m,
              ResidueElement(p, precision, 4).inverse()};
    }
    case TypeIIITwist::SqrtA: {
      // t^2 + u z^2 - pi y^2 - u pi x^2 is the type I form with r = -u, D = pi in (t, z, y, x).
      QuadForm4 source = canonical_form(FormShapeId::III_SqrtA, ctx, precision);
      QuadForm4 target = QuadForm4::diagonal(p, precision, {1, u, -pi, -u * pi}, "I(r=-u,D=pi)");
      auto m = rows({{{0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}}});
      auto shape = identify_shape(target, ctx);
      if (!shape) throw Error(ErrorCode::ShapeNotInCatalog, "type III sqrtA target");
      return {FormShapeId::III_SqrtA, source, target, *shape, m, ResidueElement(p, precision, 1)};
    }
    case TypeIIITwist::DPlusI: {
      if (!ctx.d()) throw Error(ErrorCode::MinusOneIsSquare, "d+i branch needs p = 3 mod 4");
      const std::int64_t d = *ctx.d(), ud = d * d + 1;
      QuadForm4 source = canonical_form(FormShapeId::III_DPlusI, ctx, precision);
      // X^2 - u' Y^2 - pi (Z^2 - u' T^2), u' = d^2 + 1, X = t + dz, Y = z, Z = y + dx, T = x.
      QuadForm4 target = QuadForm4::diagonal(p, precision, {1, -ud, -pi, ud * pi}, "I(r=d^2+1,D=pi)");
      auto m = rows({{{0, 0, d, 1}, {0, 0, 1, 0}, {d, 1, 0, 0}, {1, 0, 0, 0}}});
      auto shape = identify_shape(target, ctx);
      if (!shape) throw Error(ErrorCode::ShapeNotInCatalog, "type III d+i target");
      return {FormShapeId::III_DPlusI, source, target, *shape, m, ResidueElement(p, precision, 1)};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown type III twist");
}

}  // namespace twchar
