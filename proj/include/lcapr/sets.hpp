#pragma once

// Constructors and verifiers for uniqueness sets of Paley-Wiener spaces and
// for completeness of translate systems.

#include <lcapr/windows.hpp>

namespace lcapr {

// Minimal pairwise distance under the sup metric built from circular distance
// on cyclic and torus coordinates and |.| on integer lines.
namespace detail {

inline double coord_distance(const Factor& f, std::int64_t a, std::int64_t b) {
  if (!f.finite()) return static_cast<double>(std::llabs(a - b));
  const std::int64_t d = mod(a - b, f.order);
  return static_cast<double>(std::min(d, f.order - d));
}

inline double coord_distance(const Factor& f, const DualCoord& a, const DualCoord& b) {
  if (f.finite()) return coord_distance(f, a.num, b.num);
  const double d = std::abs(static_cast<double>(a.num) / a.den - static_cast<double>(b.num) / b.den);
  return std::min(d, 1.0 - d);
}

}  // namespace detail

template <class P>
double minimal_gap(const GroupSpec& g, const std::vector<P>& points) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      double d = 0.0;
      for (std::size_t c = 0; c < g.arity(); ++c)
        d = std::max(d, detail::coord_distance(g[c], points[i].c[c], points[j].c[c]));
      gap = std::min(gap, d);
    }
  return gap;
}

// Rank certificate that `points` is a uniqueness set for PW_spectrum.
template <class P, class Q>
struct UniquenessCertificate {
  std::vector<P> points;
  std::vector<Q> spectrum;
  Eigen::Index rank = 0;
  double condition = std::numeric_limits<double>::infinity();
  bool separated = false;
  // Every ball of this radius around a point holds no other point.
  double separation_radius = 0.0;

  bool valid() const { return rank == static_cast<Eigen::Index>(spectrum.size()); }
};

template <class P, class Q>
UniquenessCertificate<P, Q> certify_uniqueness(const GroupSpec& g, const std::vector<P>& points,
                                               const std::vector<Q>& spectrum) {
  UniquenessCertificate<P, Q> c{points, spectrum};
  const auto v = uniqueness_rank_oracle(g, points, spectrum);
  c.rank = v.rank;
  c.condition = v.condition;
  const double gap = minimal_gap(g, points);
  c.separated = gap > 0.0;
  c.separation_radius = std::isinf(gap) ? 0.5 : gap / 2.0;
  return c;
}

// Scans the pool and keeps every point whose character vector
// X(x) = (<x, eta_0>, ..., <x, eta_n>) raises the rank of those kept so far,
// stopping at full rank. The output therefore never exceeds |spectrum|.
template <class P, class Q>
std::vector<P> greedy_uniqueness_compact(const GroupSpec& g, const std::vector<Q>& spectrum,
                                         const std::vector<P>& pool) {
  if (spectrum.empty()) throw Error("greedy_uniqueness_compact: empty spectrum");
  const auto target = static_cast<Eigen::Index>(spectrum.size());
  std::vector<P> chosen;
  Eigen::Index rank = 0;
  for (const auto& x : pool) {
    chosen.push_back(x);
    const auto r = rank_info(character_matrix(g, chosen, spectrum), oracle_rank_tol).rank;
    if (r > rank) {
      rank = r;
      if (rank == target) return chosen;
    } else {
      chosen.pop_back();
    }
  }
  throw Error("greedy_uniqueness_compact: pool exhausted at rank " + std::to_string(rank) + " of " +
              std::to_string(target));
}

// Candidate pool for a group whose points are torus/cyclic characters:
// roots of unity of order `order` on every torus factor, every residue on
// cyclic factors.
inline std::vector<DualElement> dual_candidate_pool(const GroupSpec& g, std::int64_t order) {
  std::vector<DualElement> out;
  for (const auto& base : enumerate_dual_finite(g)) {
    std::vector<DualElement> cur{base};
    for (std::size_t i = 0; i < g.arity(); ++i) {
      if (g[i].finite()) continue;
      std::vector<DualElement> next;
      for (const auto& xi : cur)
        for (std::int64_t p = 0; p < order; ++p) {
          DualElement e = xi;
          e.c[i] = torus_coord(p, order);
          next.push_back(std::move(e));
        }
      cur = std::move(next);
    }
    out.insert(out.end(), cur.begin(), cur.end());
  }
  return out;
}

// Pool for spectra in G evaluated on the dual. The order is 2|spectrum| + 1,
// raised to exceed the spread of every integer-line coordinate so distinct
// frequencies stay distinct modulo the order.
inline std::vector<DualElement> default_dual_pool(const GroupSpec& g, const std::vector<Element>& spectrum) {
  std::int64_t order = 2 * static_cast<std::int64_t>(spectrum.size()) + 1;
  for (std::size_t i = 0; i < g.arity(); ++i) {
    if (g[i].finite() || spectrum.empty()) continue;
    auto [lo, hi] = std::minmax_element(spectrum.begin(), spectrum.end(),
                                        [i](const Element& a, const Element& b) { return a.c[i] < b.c[i]; });
    order = std::max(order, hi->c[i] - lo->c[i] + 1);
  }
  return dual_candidate_pool(g, order);
}

// Canonical section of Ĝ / H^perp: a uniqueness set for PW over (H^perp)^perp.
inline std::vector<DualElement> section_uniqueness(const GroupSpec& g, const DualSubgroup& h_perp) {
  return coset_section(g, h_perp).representatives;
}

// Chain member H' containing K - K, then a section of Ĝ / H'^perp; since
// PW_{K-K} ⊆ PW_{H'} it is a uniqueness set for PW_{K-K}.
inline std::vector<DualElement> chain_uniqueness(const GroupSpec& g, const std::vector<SubgroupData>& chain,
                                                 const std::vector<Element>& k_minus_k) {
  const auto& h = minimal_chain_member(chain, k_minus_k);
  return section_uniqueness(g, annihilator(g, h));
}

template <class P>
std::vector<P> product_points(const std::vector<P>& first, const std::vector<P>& second) {
  std::vector<P> out;
  out.reserve(first.size() * second.size());
  for (const auto& a : first)
    for (const auto& b : second) out.push_back(concat(a, b));
  return out;
}

// Γ1 × Γ2 in the product group, a uniqueness set for PW_{Ω1 × Ω2}.
template <class P>
std::pair<GroupSpec, std::vector<P>> product_uniqueness(const GroupSpec& g1, const std::vector<P>& part1,
                                                        const GroupSpec& g2, const std::vector<P>& part2) {
  return {product_group(g1, g2), product_points(part1, part2)};
}

// ---------------------------------------------------------------------------
// Completeness

struct CompletenessCertificate {
  std::string window_id;
  Element shift;
  std::vector<Element> k_set;
  std::vector<Element> lambda;
  Eigen::Index rank = 0;
  double condition = std::numeric_limits<double>::infinity();

  // On finite K, C(K) has dimension |K|, so density means spanning.
  bool complete() const { return rank == static_cast<Eigen::Index>(k_set.size()); }
};

inline CompletenessCertificate completeness_check(const Signal& g, const Element& s, const std::vector<Element>& k_set,
                                                  const std::vector<Element>& lambda, std::string window_id = {}) {
  CompletenessCertificate c{std::move(window_id), s, k_set, lambda};
  if (k_set.empty()) throw Error("completeness_check: empty K");
  if (lambda.empty()) return c;
  const auto info = rank_info(translate_system_matrix(g, s, k_set, lambda), oracle_rank_tol);
  c.rank = info.rank;
  if (c.complete()) {
    // Condition restricted to the |K| directions that matter.
    const auto& sv = info.singular_values;
    c.condition = sv(0) / sv(static_cast<Eigen::Index>(k_set.size()) - 1);
  }
  return c;
}

// Completeness for every s in K - K.
inline std::vector<CompletenessCertificate> completeness_sweep(const Signal& g, const std::vector<Element>& k_set,
                                                               const std::vector<Element>& lambda,
                                                               const std::string& window_id = {}) {
  std::vector<CompletenessCertificate> out;
  for (const auto& s : difference_set(g.group(), k_set)) out.push_back(completeness_check(g, s, k_set, lambda, window_id));
  return out;
}

// g1 ⊗ g2 on G1 × G2 and Λ1 × Λ2; T_{(x,y)}(g1 g2) = (T_x g1)(T_y g2).
struct ProductWindow {
  Signal window;
  std::vector<Element> lambda;
};

inline ProductWindow product_completeness(const Signal& g1, const Signal& g2, const std::vector<Element>& lambda1,
                                          const std::vector<Element>& lambda2) {
  const GroupSpec grp = product_group(g1.group(), g2.group());
  std::vector<Element> support;
  std::vector<cplx> values;
  for (std::size_t i = 0; i < g1.support().size(); ++i)
    for (std::size_t j = 0; j < g2.support().size(); ++j) {
      support.push_back(concat(g1.support()[i], g2.support()[j]));
      values.push_back(g1.values()[i] * g2.values()[j]);
    }
  const HaarWeights w{g1.weights().primal_weight * g2.weights().primal_weight,
                      g1.weights().dual_weight * g2.weights().dual_weight};
  return {Signal(grp, std::move(support), std::move(values), w), product_points(lambda1, lambda2)};
}

}  // namespace lcapr
