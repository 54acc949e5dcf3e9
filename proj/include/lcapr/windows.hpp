#pragma once

// Random windows with complete systems of autocorrelation translates:
//
//  * the Steinhaus window on a group with a compact-open subgroup H,
//      g = sum_{eta, k} lambda_{eta,k} T_{-x_k} eta chi_{H - x_k},
//    with independent lambda_{eta,k} = a_eta Z (Z uniform on the circle);
//  * the Gaussian window on a discrete group, g(y_k) = gamma_k i.i.d. N(0,1),
//    together with the inductive choice of translation indices that makes
//    the matrices A^s_N have independent entries.

#include <lcapr/stft.hpp>

#include <numeric>
#include <set>

namespace lcapr {

// ---------------------------------------------------------------------------
// Counter-based random streams: every draw is a pure function of
// (seed, stream, counter), so draws for distinct indices are independent of
// evaluation order and of truncation length.

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Uniform in [0, 1) with 53 random bits.
inline double stream_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t h = detail::splitmix64(seed);
  h = detail::splitmix64(h ^ (stream * 0xd1b54a32d192ed03ULL));
  h = detail::splitmix64(h ^ (counter * 0x8cb92ba72f3d8dd7ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller on two independent stream draws.
inline double stream_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const double u1 = 1.0 - stream_uniform(seed, 2 * stream, counter);  // (0, 1]
  const double u2 = stream_uniform(seed, 2 * stream + 1, counter);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

// ---------------------------------------------------------------------------
// Characters of H

// The dual of H, realised as canonical representatives of Ĝ / H^perp. Index 0
// is the trivial character.
struct CharacterGroup {
  GroupSpec group;
  SubgroupData subgroup;
  CosetSection<DualElement> quotient;

  std::size_t size() const noexcept { return quotient.size(); }
  const DualElement& operator[](std::size_t i) const { return quotient.representatives[i]; }

  std::size_t index_of(const DualElement& xi) const { return quotient.coset_index(xi); }
  std::size_t difference(std::size_t mu, std::size_t eta) const {
    return index_of(subtract(group, (*this)[mu], (*this)[eta]));
  }
  std::size_t negation(std::size_t mu) const { return index_of(negate(group, (*this)[mu])); }

  // eta(h) for h in H.
  cplx evaluate(std::size_t eta, const Element& h) const { return pairing(group, h, (*this)[eta]); }
};

inline CharacterGroup character_group(const GroupSpec& g, const SubgroupData& h) {
  if (!h.finite()) throw Error("character_group: subgroup must be compact (finite)");
  return {g, h, coset_section(g, annihilator(g, h))};
}

// ---------------------------------------------------------------------------
// Coefficient profiles

// Moduli a_mu of the Steinhaus coefficients, indexed like a CharacterGroup.
struct CoeffProfile {
  std::vector<double> a;

  CoeffProfile() = default;
  explicit CoeffProfile(std::vector<double> values) : a(std::move(values)) {
    if (a.empty()) throw Error("coefficient profile is empty");
    double tail = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!(a[i] > 0.0) || !std::isfinite(a[i])) throw Error("coefficients a_mu must be positive and finite");
      if (i) tail += a[i] * a[i];
    }
    if (!(a[0] * a[0] > tail)) throw Error("coefficient profile violates a_0^2 > sum_{mu != 0} a_mu^2");
  }

  std::size_t size() const noexcept { return a.size(); }
  double max() const { return *std::max_element(a.begin(), a.end()); }
};

// a_0 = 1 and a flat tail with sum_{mu != 0} a_mu^2 = 1/4.
inline CoeffProfile default_coeffs(std::size_t num_characters) {
  if (num_characters == 0) throw Error("default_coeffs: the dual of H is empty");
  std::vector<double> a(num_characters, 1.0);
  if (num_characters > 1) {
    const double tail = 1.0 / (2.0 * std::sqrt(static_cast<double>(num_characters - 1)));
    std::fill(a.begin() + 1, a.end(), tail);
  }
  return CoeffProfile(std::move(a));
}

inline CoeffProfile default_coeffs(const std::vector<DualElement>& h_dual) {
  if (h_dual.empty()) throw Error("default_coeffs: the dual of H is empty");
  return default_coeffs(h_dual.size());
}

// ---------------------------------------------------------------------------
// Steinhaus draws

// lambda_{mu,k} = a_mu * exp(2 pi i U_{mu,k}), one independent stream per mu.
struct SteinhausDraw {
  std::uint64_t seed = 0;
  std::size_t num_characters = 0;
  std::size_t num_cosets = 0;
  std::vector<cplx> lambda;  // row-major in k

  const cplx& operator()(std::size_t mu, std::size_t k) const { return lambda[k * num_characters + mu]; }
};

inline cplx steinhaus_phase(std::uint64_t seed, std::size_t mu, std::size_t k) {
  const double u = stream_uniform(seed, mu, k);
  return {std::cos(two_pi * u), std::sin(two_pi * u)};
}

inline SteinhausDraw steinhaus_draws(const CoeffProfile& coeffs, std::uint64_t seed, std::size_t num_cosets) {
  SteinhausDraw d{seed, coeffs.size(), num_cosets, {}};
  d.lambda.resize(coeffs.size() * num_cosets);
  for (std::size_t k = 0; k < num_cosets; ++k)
    for (std::size_t mu = 0; mu < coeffs.size(); ++mu)
      d.lambda[k * coeffs.size() + mu] = coeffs.a[mu] * steinhaus_phase(seed, mu, k);
  return d;
}

// The window materialised on the cosets H - x_k for x_k in `section`; on
// H - x_k it equals sum_eta lambda_{eta,k} eta(y + x_k).
inline Signal steinhaus_window(const GroupSpec& g, const SubgroupData& h, const std::vector<Element>& section,
                               const CoeffProfile& coeffs, std::uint64_t seed, HaarWeights weights) {
  const auto chars = character_group(g, h);
  if (coeffs.size() != chars.size())
    throw Error("steinhaus_window: profile has " + std::to_string(coeffs.size()) + " coefficients but H has " +
                std::to_string(chars.size()) + " characters");
  {
    const auto cosets = coset_section(g, h);
    std::vector<bool> hit(cosets.size(), false);
    for (const auto& x : section) {
      const auto i = cosets.coset_index(x);
      if (hit[i]) throw Error("steinhaus_window: section lists two points of the same coset of H");
      hit[i] = true;
    }
  }
  const auto draw = steinhaus_draws(coeffs, seed, section.size());
  std::vector<Element> support;
  std::vector<cplx> values;
  for (std::size_t k = 0; k < section.size(); ++k) {
    for (const auto& y_plus_x : h.elements) {
      cplx v{};
      for (std::size_t eta = 0; eta < chars.size(); ++eta) v += draw(eta, k) * chars.evaluate(eta, y_plus_x);
      support.push_back(subtract(g, y_plus_x, section[k]));
      values.push_back(v);
    }
  }
  return Signal(g, std::move(support), std::move(values), weights);
}

inline Signal steinhaus_window(const GroupSpec& g, const SubgroupData& h, const CosetSection<Element>& section,
                               const CoeffProfile& coeffs, std::uint64_t seed) {
  if (section.subgroup.elements != h.elements) throw Error("steinhaus_window: section is not a section of G/H");
  return steinhaus_window(g, h, section.representatives, coeffs, seed, haar_weights(g, h));
}

// Coefficient of eta in T_{x_k} g_s restricted to H:
// sum_mu lambda_{mu,k} conj(lambda_{mu-eta,k}) mu(-s).
inline cplx translate_coefficient(const CharacterGroup& chars, const SteinhausDraw& draw, std::size_t k,
                                  std::size_t eta, const Element& s) {
  const Element minus_s = negate(chars.group, s);
  cplx acc{};
  for (std::size_t mu = 0; mu < chars.size(); ++mu)
    acc += draw(mu, k) * std::conj(draw(chars.difference(mu, eta), k)) * chars.evaluate(mu, minus_s);
  return acc;
}

// ---------------------------------------------------------------------------
// Law-of-large-numbers averages

// (1/N) sum_k lambda_{mu,k} conj(lambda_{mu-eta,k}) conj(lambda_{0,k}) lambda_{-eta0,k}
inline cplx quartic_average(const CharacterGroup& chars, const SteinhausDraw& draw, std::size_t mu, std::size_t eta,
                            std::size_t eta0, std::size_t n) {
  if (n == 0 || n > draw.num_cosets) throw Error("quartic_average: N outside the drawn range");
  const std::size_t mu_eta = chars.difference(mu, eta);
  const std::size_t neg_eta0 = chars.negation(eta0);
  cplx acc{};
  for (std::size_t k = 0; k < n; ++k)
    acc += draw(mu, k) * std::conj(draw(mu_eta, k)) * std::conj(draw(0, k)) * draw(neg_eta0, k);
  return acc / static_cast<double>(n);
}

// (1/N) sum_k lambda_{mu,k} conj(lambda_{mu-eta,k})
inline cplx pair_average(const CharacterGroup& chars, const SteinhausDraw& draw, std::size_t mu, std::size_t eta,
                         std::size_t n) {
  if (n == 0 || n > draw.num_cosets) throw Error("pair_average: N outside the drawn range");
  const std::size_t mu_eta = chars.difference(mu, eta);
  cplx acc{};
  for (std::size_t k = 0; k < n; ++k) acc += draw(mu, k) * std::conj(draw(mu_eta, k));
  return acc / static_cast<double>(n);
}

// Almost-sure limits of the two averages.
inline double quartic_limit(const CharacterGroup& chars, const CoeffProfile& a, std::size_t mu, std::size_t eta,
                            std::size_t eta0) {
  if (mu == 0 && eta == eta0) {
    const double a_neg = a.a[chars.negation(eta0)];
    return a.a[0] * a.a[0] * a_neg * a_neg;
  }
  return 0.0;
}

inline double pair_limit(const CoeffProfile& a, std::size_t mu, std::size_t eta) {
  return eta == 0 ? a.a[mu] * a.a[mu] : 0.0;
}

// ---------------------------------------------------------------------------
// Discrete groups

// g(y_k) = gamma_k, i.i.d. standard normal, on the listed points.
inline Signal gaussian_discrete_window(const GroupSpec& g, const std::vector<Element>& enumeration, std::uint64_t seed,
                                       HaarWeights weights = {}) {
  std::vector<cplx> values;
  values.reserve(enumeration.size());
  for (std::size_t k = 0; k < enumeration.size(); ++k) values.emplace_back(stream_normal(seed, 0, k), 0.0);
  return Signal(g, enumeration, std::move(values), weights);
}

// Chooses n translation indices j_1, ..., j_n into `enumeration` such that,
// for every shift s, the window arguments {y_k - y_j, y_k - s - y_j : k < n}
// used by column j are disjoint from those of every previously chosen column.
// All arguments must lie in the enumeration (where the window is defined).
inline std::vector<std::size_t> select_translation_indices(const GroupSpec& g, const std::vector<Element>& enumeration,
                                                           std::size_t n, const std::vector<Element>& shifts) {
  if (n > enumeration.size()) throw Error("select_translation_indices: enumeration shorter than n");
  const std::set<Element> domain(enumeration.begin(), enumeration.end());
  if (domain.size() != enumeration.size()) throw Error("select_translation_indices: enumeration has repeated points");
  const std::vector<Element> rows(enumeration.begin(), enumeration.begin() + static_cast<std::ptrdiff_t>(n));

  std::vector<std::set<Element>> used(shifts.size());
  std::vector<std::size_t> chosen;
  for (std::size_t j = 0; j < enumeration.size() && chosen.size() < n; ++j) {
    std::vector<std::set<Element>> args(shifts.size());
    bool ok = true;
    for (std::size_t si = 0; si < shifts.size() && ok; ++si) {
      for (const auto& y : rows) {
        const Element a = subtract(g, y, enumeration[j]);
        const Element b = subtract(g, a, shifts[si]);
        if (!domain.count(a) || !domain.count(b) || used[si].count(a) || used[si].count(b)) {
          ok = false;
          break;
        }
        args[si].insert(a);
        args[si].insert(b);
      }
    }
    if (!ok) continue;
    chosen.push_back(j);
    for (std::size_t si = 0; si < shifts.size(); ++si) used[si].insert(args[si].begin(), args[si].end());
  }
  if (chosen.size() < n)
    throw Error("select_translation_indices: enumeration exhausted after " + std::to_string(chosen.size()) + " of " +
                std::to_string(n) + " indices");
  return chosen;
}

// A^s_N = (T_{y_{j_l}} g_s(y_k))_{k, l} over the first N enumeration points.
inline Matrix discrete_translate_matrix(const Signal& window, const std::vector<Element>& enumeration,
                                        const std::vector<std::size_t>& indices, const Element& s) {
  const std::size_t n = indices.size();
  if (n > enumeration.size()) throw Error("discrete_translate_matrix: too many indices");
  std::vector<Element> rows(enumeration.begin(), enumeration.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<Element> lambda;
  for (auto j : indices) lambda.push_back(enumeration.at(j));
  return translate_system_matrix(window, s, rows, lambda);
}

}  // namespace lcapr
