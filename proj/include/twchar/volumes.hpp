#pragma once

#include "twchar/kernels.hpp"
#include "twchar/localfield.hpp"
#include "twchar/quadforms.hpp"
#include "twchar/rational.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twchar {

struct VolumeTag {};
struct CharSumTag {};

// entries[n] for n = 0..n_max.
template <class Tag>
struct ShellProfile {
  std::uint32_t q = 0;
  int n_max = 0;
  std::vector<Rational> entries;

  friend bool operator==(const ShellProfile&, const ShellProfile&) = default;
};

// v_n = vol(V_n^0)
using VolumeProfile = ShellProfile<VolumeTag>;
// I_n = integral of chi_Y(Q) over V_n^0
using CharSumProfile = ShellProfile<CharSumTag>;

enum class EnumerationMethod { Auto, Flat, Pruned };

std::string to_string(EnumerationMethod m);
EnumerationMethod parse_method(std::string_view s);

struct EnumerationOptions {
  EnumerationMethod method = EnumerationMethod::Auto;
  KernelKind kernel = KernelKind::Auto;
  unsigned threads = 1;
};

using Count = unsigned __int128;

// Counts of pivot-normalized representatives mod p^N, each of measure p^{-3N}.
struct ShellHistogram {
  std::uint32_t p = 0;
  int precision = 0;
  int n_max = 0;
  // counts[pivot][n][c]: c = 0 when the unit part of Q is a square mod p, 1 otherwise.
  std::array<std::vector<std::array<Count, 2>>, 4> counts;
  // val(Q) > n_max, including Q = 0 mod p^N.
  std::array<Count, 4> beyond{};

  Rational measure(Count c) const;
  friend bool operator==(const ShellHistogram&, const ShellHistogram&) = default;
};

ShellHistogram shell_histogram(const QuadForm4& q, int n_max, const EnumerationOptions& opts = {});
ShellHistogram shell_histogram_flat(const QuadForm4& q, int n_max, KernelKind kernel, unsigned threads);
ShellHistogram shell_histogram_pruned(const QuadForm4& q, int n_max);

VolumeProfile volume_profile_from(const ShellHistogram& h);
CharSumProfile char_profile_from(const ShellHistogram& h, const CharDescriptor& y);

// PrecisionTooLow unless q.precision() >= n_max + 2.
VolumeProfile vol_profile(const QuadForm4& q, int n_max, const EnumerationOptions& opts = {});
CharSumProfile char_profile(const QuadForm4& q, const CharDescriptor& y, int n_max,
                            const EnumerationOptions& opts = {});

enum class LemmaId { I_0, I_1, I_2, I_3, Anisotropic, II_1, II_2, II_3, II_4, II_5, IV_2, A_0, A_1_Pi, A_1_UPi };

std::string to_string(LemmaId id);
LemmaId parse_lemma(std::string_view s);
const std::vector<LemmaId>& all_lemmas();
// Lemma whose table applies to the canonical shape; UnknownLemma for type III shapes.
LemmaId lemma_for_shape(FormShapeId shape);
// True for the character-sum tables (A.1).
bool lemma_is_char_sum(LemmaId id);

// The lemma's piecewise value at shell n; I.0 and A.0 need n >= 1.
Rational closed_form_profile(LemmaId id, std::uint32_t q, int n);
VolumeProfile closed_form_volume_profile(LemmaId id, std::uint32_t q, int n_max);
CharSumProfile closed_form_char_profile(LemmaId id, std::uint32_t q, int n_max);

// Measure of {x in R : |c^2 - x^2| = q^-n}, weighted by chi_Y(c^2 - x^2) when y is given.
Rational shell_integral(std::int64_t c, int n, const std::optional<CharDescriptor>& y, const PrimeContext& ctx,
                        KernelKind kernel = KernelKind::Auto);
Rational shell_integral_closed_form(std::uint32_t q, int n, const std::optional<CharDescriptor>& y);

// Shells of |x| on {|x| <= 1}: entries q^-n (1 - 1/q), by 1-variable enumeration mod p^(n_max+2).
VolumeProfile coordinate_profile(const PrimeContext& ctx, int n_max, KernelKind kernel = KernelKind::Auto);

// Measure of each pivot subdomain of V^0, times chi_Y(Q) and q^{-m val Q}, for forms whose
// shells end by n_max.  Used for the anisotropic decomposition.
std::array<Rational, 4> pivot_subdomain_sums(const ShellHistogram& h, const std::optional<CharDescriptor>& y,
                                             int m);

}  // namespace twchar
