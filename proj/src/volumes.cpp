#include "twchar/volumes.hpp"

#include "twchar/error.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace twchar {

namespace {

std::int64_t md(std::int64_t v, std::int64_t m) {
  v %= m;
  return v < 0 ? v + m : v;
}

Count count_pow(std::uint32_t p, int k) {
  Count r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

BigInt to_big(Count c) {
  BigInt r = static_cast<std::uint64_t>(c >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(c);
  return r;
}

struct BucketTable {
  std::vector<std::uint8_t> ids;
  int count;
  int overflow;
};

// Residue r mod p^N to 2 * val + (nonsquare unit part), or the overflow id.
BucketTable make_buckets(std::uint32_t p, int precision, int n_max) {
  const std::int64_t m = prime_power(p, precision);
  BucketTable t{std::vector<std::uint8_t>(static_cast<std::size_t>(m)), 2 * (n_max + 1) + 1, 2 * (n_max + 1)};
  std::vector<std::int8_t> leg(p);
  for (std::uint32_t e = 1; e < p; ++e) leg[e] = static_cast<std::int8_t>(legendre(e, p));
  for (std::int64_t r = 0; r < m; ++r) {
    if (r == 0) {
      t.ids[0] = static_cast<std::uint8_t>(t.overflow);
      continue;
    }
    std::int64_t x = r;
    int v = 0;
    while (x % p == 0) x /= p, ++v;
    t.ids[r] = v > n_max ? static_cast<std::uint8_t>(t.overflow)
                         : static_cast<std::uint8_t>(2 * v + (leg[x % p] == 1 ? 0 : 1));
  }
  return t;
}

ShellHistogram empty_histogram(std::uint32_t p, int precision, int n_max) {
  ShellHistogram h;
  h.p = p;
  h.precision = precision;
  h.n_max = n_max;
  for (auto& c : h.counts) c.assign(n_max + 1, {0, 0});
  return h;
}

void check_depth(const QuadForm4& q, int n_max) {
  if (n_max < 0) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 0");
  if (q.precision() < n_max + 2)
    throw Error(ErrorCode::PrecisionTooLow, "precision " + std::to_string(q.precision()) + " < n_max + 2 = " +
                                                std::to_string(n_max + 2));
}

int val_capped(std::int64_t x, std::uint32_t p, int cap) {
  if (x == 0) return cap;
  int v = 0;
  while (v < cap && x % p == 0) x /= p, ++v;
  return v;
}

}  // namespace

std::string to_string(EnumerationMethod m) {
  switch (m) {
    case EnumerationMethod::Auto: return "auto";
    case EnumerationMethod::Flat: return "flat";
    case EnumerationMethod::Pruned: return "pruned";
  }
  return "?";
}

EnumerationMethod parse_method(std::string_view s) {
  if (s == "auto") return EnumerationMethod::Auto;
  if (s == "flat") return EnumerationMethod::Flat;
  if (s == "pruned") return EnumerationMethod::Pruned;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(s) + "'");
}

Rational ShellHistogram::measure(Count c) const {
  return Rational(to_big(c)) * qpow(p, -3 * precision);
}

ShellHistogram shell_histogram_flat(const QuadForm4& q, int n_max, KernelKind kernel, unsigned threads) {
  if (n_max < 0 || n_max >= q.precision()) throw Error(ErrorCode::PrecisionTooLow, "n_max must be below precision");
  const QuadForm4 lit = q.literal();
  const std::uint32_t p = q.prime();
  const int n = q.precision();
  const std::int64_t m = lit.gram().modulus();
  const auto& g = lit.gram();
  const KernelKind kind = resolve_kernel(kernel);
  const BucketTable table = make_buckets(p, n, n_max);
  ShellHistogram h = empty_histogram(p, n, n_max);
  threads = std::max(1u, threads);

  for (int pivot = 0; pivot < 4; ++pivot) {
    std::array<int, 3> free{};
    for (int j = 0, c = 0; j < 4; ++j)
      if (j != pivot) free[c++] = j;
    const int a = free[0], b = free[1], c = free[2];
    auto step = [&](int j) { return j < pivot ? static_cast<std::int64_t>(p) : std::int64_t{1}; };
    auto span = [&](int j) { return j < pivot ? m / p : m; };

    std::vector<std::int64_t> inner(static_cast<std::size_t>(span(c)));
    for (std::int64_t s = 0; s < span(c); ++s) inner[s] = s * step(c);
    const RowKernel row(m, g.raw(c, c), std::move(inner), table.ids, table.count);

    const std::int64_t na = span(a), nb = span(b);
    std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(table.count, 0));
    auto work = [&](unsigned tid) {
      auto& hist = partial[tid];
      for (std::int64_t ia = tid; ia < na; ia += threads) {
        const std::int64_t va = ia * step(a);
        const std::int64_t qa = md(g.raw(pivot, pivot) + 2 * (g.raw(pivot, a) * va % m) + g.raw(a, a) * (va * va % m), m);
        const std::int64_t la = md(g.raw(c, pivot) + g.raw(c, a) * va, m);
        const std::int64_t ba = md(g.raw(b, pivot) + g.raw(b, a) * va, m);
        for (std::int64_t ib = 0; ib < nb; ++ib) {
          const std::int64_t vb = ib * step(b);
          const std::int64_t base = md(qa + 2 * (ba * vb % m) + g.raw(b, b) * (vb * vb % m), m);
          const std::int64_t lin = md(2 * (la + g.raw(c, b) * vb % m), m);
          row.accumulate(base, lin, hist, kind);
        }
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
      for (auto& t : pool) t.join();
    }
    for (const auto& hist : partial) {
      for (int v = 0; v <= n_max; ++v)
        for (int cls = 0; cls < 2; ++cls) h.counts[pivot][v][cls] += hist[2 * v + cls];
      h.beyond[pivot] += hist[table.overflow];
    }
  }
  return h;
}

ShellHistogram shell_histogram_pruned(const QuadForm4& q, int n_max) {
  const std::uint32_t p = q.prime();
  const int n = q.precision();
  if (n_max < 0 || n_max >= n) throw Error(ErrorCode::PrecisionTooLow, "n_max must be below precision");
  if (3.0 * n * std::log2(static_cast<double>(p)) > 126.0)
    throw Error(ErrorCode::InvalidArgument, "p^(3N) overflows the 128-bit counters");
  const QuadForm4 lit = q.literal();
  const std::int64_t m = lit.gram().modulus();
  const auto& g = lit.gram();
  ShellHistogram h = empty_histogram(p, n, n_max);
  const Count half = (p - 1) / 2;

  for (int pivot = 0; pivot < 4; ++pivot) {
    auto& counts = h.counts[pivot];
    Count& beyond = h.beyond[pivot];
    std::array<int, 3> free{};
    for (int j = 0, c = 0; j < 4; ++j)
      if (j != pivot) free[c++] = j;

    // Cell w + p^k R^3 in the free coordinates.
    auto visit = [&](auto&& self, std::array<std::int64_t, 4>& w, int k) -> void {
      const Count cell = count_pow(p, 3 * (n - k));
      std::int64_t qw = 0;
      std::array<std::int64_t, 4> gw{};
      for (int i = 0; i < 4; ++i) {
        std::int64_t s = 0;
        for (int j = 0; j < 4; ++j) s = md(s + g.raw(i, j) * w[j], m);
        gw[i] = s;
        qw = md(qw + w[i] * s, m);
      }
      const int v = val_capped(qw, p, n);
      int e = k;
      for (int j : free) e = std::min(e, val_capped(md(2 * gw[j], m), p, k));
      const int t = k + std::min(e, k);
      if (v < t) {
        if (v > n_max) {
          beyond += cell;
        } else {
          std::int64_t unit = qw;
          for (int i = 0; i < v; ++i) unit /= p;
          counts[v][legendre(unit % p, p) == 1 ? 0 : 1] += cell;
        }
        return;
      }
      if (e < k) {
        // Q = Q(w) + p^(k+e) U with U Haar-uniform on the cell.
        Count placed = 0;
        for (int s = t; s <= n_max; ++s) {
          const Count each = count_pow(p, 3 * (n - k) - (s - t) - 1) * half;
          counts[s][0] += each;
          counts[s][1] += each;
          placed += 2 * each;
        }
        beyond += cell - placed;
        return;
      }
      if (t > n_max) {
        beyond += cell;
        return;
      }
      const std::int64_t pk = prime_power(p, k);
      for (std::uint32_t d0 = 0; d0 < p; ++d0)
        for (std::uint32_t d1 = 0; d1 < p; ++d1)
          for (std::uint32_t d2 = 0; d2 < p; ++d2) {
            std::array<std::int64_t, 4> child = w;
            child[free[0]] += d0 * pk;
            child[free[1]] += d1 * pk;
            child[free[2]] += d2 * pk;
            self(self, child, k + 1);
          }
    };

    std::int64_t roots = 1;
    for (int j = pivot + 1; j < 4; ++j) roots *= p;
    for (std::int64_t idx = 0; idx < roots; ++idx) {
      std::array<std::int64_t, 4> w{0, 0, 0, 0};
      w[pivot] = 1;
      std::int64_t r = idx;
      for (int j = pivot + 1; j < 4; ++j) {
        w[j] = r % p;
        r /= p;
      }
      visit(visit, w, 1);
    }
  }
  return h;
}

ShellHistogram shell_histogram(const QuadForm4& q, int n_max, const EnumerationOptions& opts) {
  EnumerationMethod method = opts.method;
  if (method == EnumerationMethod::Auto) {
    // Flat while p^(3N) stays near 10^9.
    const double work = 3.0 * q.precision() * std::log10(static_cast<double>(q.prime()));
    method = work <= 9.0 ? EnumerationMethod::Flat : EnumerationMethod::Pruned;
  }
  return method == EnumerationMethod::Flat ? shell_histogram_flat(q, n_max, opts.kernel, opts.threads)
                                           : shell_histogram_pruned(q, n_max);
}

VolumeProfile volume_profile_from(const ShellHistogram& h) {
  VolumeProfile out{h.p, h.n_max, {}};
  for (int v = 0; v <= h.n_max; ++v) {
    Count total = 0;
    for (int pivot = 0; pivot < 4; ++pivot) total += h.counts[pivot][v][0] + h.counts[pivot][v][1];
    out.entries.push_back(h.measure(total));
  }
  return out;
}

CharSumProfile char_profile_from(const ShellHistogram& h, const CharDescriptor& y) {
  CharSumProfile out{h.p, h.n_max, {}};
  const std::int64_t nonsquare = find_nonsquare_unit(h.p);
  for (int v = 0; v <= h.n_max; ++v) {
    Rational total = 0;
    for (int cls = 0; cls < 2; ++cls) {
      Count c = 0;
      for (int pivot = 0; pivot < 4; ++pivot) c += h.counts[pivot][v][cls];
      const int chi = y.chi(v, cls == 0 ? 1 : nonsquare, h.p);
      total += chi * h.measure(c);
    }
    out.entries.push_back(total);
  }
  return out;
}

VolumeProfile vol_profile(const QuadForm4& q, int n_max, const EnumerationOptions& opts) {
  check_depth(q, n_max);
  return volume_profile_from(shell_histogram(q, n_max, opts));
}

CharSumProfile char_profile(const QuadForm4& q, const CharDescriptor& y, int n_max, const EnumerationOptions& opts) {
  check_depth(q, n_max);
  return char_profile_from(shell_histogram(q, n_max, opts), y);
}

std::string to_string(LemmaId id) {
  switch (id) {
    case LemmaId::I_0: return "I.0";
    case LemmaId::I_1: return "I.1";
    case LemmaId::I_2: return "I.2";
    case LemmaId::I_3: return "I.3";
    case LemmaId::Anisotropic: return "I-anisotropic";
    case LemmaId::II_1: return "II.1";
    case LemmaId::II_2: return "II.2";
    case LemmaId::II_3: return "II.3";
    case LemmaId::II_4: return "II.4";
    case LemmaId::II_5: return "II.5";
    case LemmaId::IV_2: return "IV.2";
    case LemmaId::A_0: return "A.0";
    case LemmaId::A_1_Pi: return "A.1-pi";
    case LemmaId::A_1_UPi: return "A.1-upi";
  }
  return "?";
}

const std::vector<LemmaId>& all_lemmas() {
  static const std::vector<LemmaId> ids{LemmaId::I_0,  LemmaId::I_1,  LemmaId::I_2,  LemmaId::I_3,   LemmaId::Anisotropic,
                                        LemmaId::II_1, LemmaId::II_2, LemmaId::II_3, LemmaId::II_4,  LemmaId::II_5,
                                        LemmaId::IV_2, LemmaId::A_0,  LemmaId::A_1_Pi, LemmaId::A_1_UPi};
  return ids;
}

LemmaId parse_lemma(std::string_view s) {
  for (auto id : all_lemmas())
    if (to_string(id) == s) return id;
  throw Error(ErrorCode::UnknownLemma, "unknown lemma '" + std::string(s) + "'");
}

LemmaId lemma_for_shape(FormShapeId shape) {
  switch (shape) {
    case FormShapeId::I_1: return LemmaId::I_1;
    case FormShapeId::I_2: return LemmaId::I_2;
    case FormShapeId::I_3: return LemmaId::I_3;
    case FormShapeId::I_Anisotropic: return LemmaId::Anisotropic;
    case FormShapeId::II_1: return LemmaId::II_1;
    case FormShapeId::II_2: return LemmaId::II_2;
    case FormShapeId::II_3:
    case FormShapeId::II_3b: return LemmaId::II_3;
    case FormShapeId::II_4: return LemmaId::II_4;
    case FormShapeId::II_5: return LemmaId::II_5;
    case FormShapeId::IV_Unramified: return LemmaId::IV_2;
    case FormShapeId::IV_Ramified: return LemmaId::II_3;
    default: break;
  }
  throw Error(ErrorCode::UnknownLemma, "no volume table for shape " + to_string(shape));
}

bool lemma_is_char_sum(LemmaId id) { return id == LemmaId::A_1_Pi || id == LemmaId::A_1_UPi; }

Rational closed_form_profile(LemmaId id, std::uint32_t q, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 0");
  const Rational Q = q;
  const Rational iq = 1 / Q;
  auto qn = [&](int k) { return qpow(q, -k); };
  switch (id) {
    case LemmaId::I_0:
      if (n < 1) throw Error(ErrorCode::InvalidArgument, "Lemma I.0 needs n >= 1");
      return 2 * qn(n) * (1 - iq);
    case LemmaId::A_0:
      if (n < 1) throw Error(ErrorCode::InvalidArgument, "Lemma A.0 needs n >= 1");
      return 0;
    case LemmaId::I_1:
      if (n == 0) return 1 - iq;
      if (n == 1) return iq * (1 - iq) * (2 + iq);
      return 2 * qn(n) * (1 - iq) * (1 + iq);
    case LemmaId::I_2:
      if (n == 0) return 1;
      if (n == 1) return iq * (1 - iq);
      if (n == 2) return qn(2) * (2 - iq - 2 * iq * iq);
      return 2 * qn(n) * (1 - iq) * (1 + iq);
    case LemmaId::I_3:
      if (n == 0) return 1 - iq * iq;
      return qn(n) * (1 - iq) * (1 + 2 * iq + iq * iq);
    case LemmaId::Anisotropic:
      if (n == 0) return 1 + iq;
      if (n == 1) return qn(2) * (1 + iq);
      return 0;
    case LemmaId::II_1:
      if (n == 0) return 1 - iq;
      if (n == 1) return 2 * iq - iq * iq + qn(3);
      return 2 * qn(n) * (1 - iq);
    case LemmaId::II_2:
      if (n == 0) return 1 + iq;
      if (n == 1) return qn(2) * (1 - iq);
      return 2 * qn(n + 1) * (1 - iq);
    case LemmaId::II_3:
    case LemmaId::II_4:
    case LemmaId::II_5:
      if (n == 0) return 1;
      if (n == 1) return iq;
      return qn(n) * (1 - iq * iq);
    case LemmaId::IV_2:
      if (n == 0) return 1 + iq * iq;
      return qn(n) * (1 - iq) * (1 + iq * iq);
    case LemmaId::A_1_Pi:
    case LemmaId::A_1_UPi:
      if (n == 0) return -iq;
      if (n == 1) return id == LemmaId::A_1_Pi ? -qn(3) : qn(3);
      return 0;
  }
  throw Error(ErrorCode::UnknownLemma, "unhandled lemma");
}

VolumeProfile closed_form_volume_profile(LemmaId id, std::uint32_t q, int n_max) {
  if (lemma_is_char_sum(id) || id == LemmaId::I_0 || id == LemmaId::A_0)
    throw Error(ErrorCode::UnknownLemma, to_string(id) + " is not a quaternary volume table");
  VolumeProfile out{q, n_max, {}};
  for (int n = 0; n <= n_max; ++n) out.entries.push_back(closed_form_profile(id, q, n));
  return out;
}

CharSumProfile closed_form_char_profile(LemmaId id, std::uint32_t q, int n_max) {
  if (!lemma_is_char_sum(id)) throw Error(ErrorCode::UnknownLemma, to_string(id) + " is not a character-sum table");
  CharSumProfile out{q, n_max, {}};
  for (int n = 0; n <= n_max; ++n) out.entries.push_back(closed_form_profile(id, q, n));
  return out;
}

Rational shell_integral(std::int64_t c, int n, const std::optional<CharDescriptor>& y, const PrimeContext& ctx,
                        KernelKind kernel) {
  const std::uint32_t p = ctx.p();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "shell integral needs n >= 1");
  if (md(c, p) == 0) throw Error(ErrorCode::NotAUnit, "c must be a unit");
  const int precision = n + 2;
  const std::int64_t m = prime_power(p, precision);
  const BucketTable table = make_buckets(p, precision, n);
  std::vector<std::int64_t> xs(static_cast<std::size_t>(m));
  for (std::int64_t x = 0; x < m; ++x) xs[x] = x;
  const RowKernel row(m, -1, std::move(xs), table.ids, table.count);
  std::vector<std::uint64_t> hist(table.count, 0);
  const std::int64_t cc = md(c, m);
  row.accumulate(cc * cc % m, 0, hist, resolve_kernel(kernel));
  const Rational cell = qpow(p, -precision);
  Rational total = 0;
  for (int cls = 0; cls < 2; ++cls) {
    const int chi = y ? y->chi(n, cls == 0 ? 1 : ctx.u(), p) : 1;
    total += chi * cell * hist[2 * n + cls];
  }
  return total;
}

Rational shell_integral_closed_form(std::uint32_t q, int n, const std::optional<CharDescriptor>& y) {
  if (y && !y->ramified()) throw Error(ErrorCode::UnknownLemma, "only the ramified character sum has a closed form");
  return closed_form_profile(y ? LemmaId::A_0 : LemmaId::I_0, q, n);
}

VolumeProfile coordinate_profile(const PrimeContext& ctx, int n_max, KernelKind kernel) {
  const std::uint32_t p = ctx.p();
  const int precision = n_max + 2;
  const std::int64_t m = prime_power(p, precision);
  const BucketTable table = make_buckets(p, precision, n_max);
  std::vector<std::int64_t> xs(static_cast<std::size_t>(m));
  for (std::int64_t x = 0; x < m; ++x) xs[x] = x;
  const RowKernel row(m, 0, std::move(xs), table.ids, table.count);
  std::vector<std::uint64_t> hist(table.count, 0);
  row.accumulate(0, 1, hist, resolve_kernel(kernel));
  VolumeProfile out{p, n_max, {}};
  for (int v = 0; v <= n_max; ++v) out.entries.push_back(qpow(p, -precision) * (hist[2 * v] + hist[2 * v + 1]));
  return out;
}

std::array<Rational, 4> pivot_subdomain_sums(const ShellHistogram& h, const std::optional<CharDescriptor>& y, int m) {
  std::array<Rational, 4> out;
  const std::int64_t nonsquare = find_nonsquare_unit(h.p);
  for (int pivot = 0; pivot < 4; ++pivot) {
    if (h.beyond[pivot] != 0)
      throw Error(ErrorCode::NoGeometricTail, "shells continue past n_max on subdomain " + std::to_string(pivot));
    Rational s = 0;
    for (int v = 0; v <= h.n_max; ++v)
      for (int cls = 0; cls < 2; ++cls) {
        const int chi = y ? y->chi(v, cls == 0 ? 1 : nonsquare, h.p) : 1;
        s += chi * qpow(h.p, -m * v) * h.measure(h.counts[pivot][v][cls]);
      }
    out[pivot] = s;
  }
  return out;
}

}  // namespace twchar
