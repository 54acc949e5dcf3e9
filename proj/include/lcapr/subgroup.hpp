#pragma once

// Subgroups stored by explicit element lists, annihilators, canonical coset
// sections and the Haar normalisation attached to a compact-open subgroup.

#include <lcapr/group.hpp>

#include <map>
#include <optional>
#include <set>

namespace lcapr {

// A subgroup of G (Point = Element) or of the dual (Point = DualElement).
//
// Finite factors are enumerated explicitly. An infinite factor (integer line
// or torus) is either absent from the subgroup ({0} in that coordinate) or
// contained entirely, which `full` records; `elements` then lists the finite
// part with that coordinate set to 0.
template <class Point>
struct Subgroup {
  GroupSpec parent;
  std::vector<Point> generators;
  std::vector<Point> elements;  // sorted, contains zero
  std::vector<bool> full;       // per factor; only ever true on infinite factors

  bool finite() const { return std::none_of(full.begin(), full.end(), [](bool b) { return b; }); }

  // Cardinality, or nullopt when the subgroup contains an infinite factor.
  std::optional<std::size_t> order() const {
    if (!finite()) return std::nullopt;
    return elements.size();
  }

  Point finite_part(const Point& x) const {
    Point r = x;
    for (std::size_t i = 0; i < full.size(); ++i)
      if (full[i]) r.c[i] = zero_coord(r.c[i]);
    return r;
  }

  bool contains(const Point& x) const {
    if (x.size() != parent.arity()) return false;
    return std::binary_search(elements.begin(), elements.end(), finite_part(x));
  }

 private:
  static std::int64_t zero_coord(std::int64_t) { return 0; }
  static DualCoord zero_coord(const DualCoord&) { return {0, 1}; }
};

using SubgroupData = Subgroup<Element>;
using DualSubgroup = Subgroup<DualElement>;

namespace detail {

template <class Point>
Subgroup<Point> close_under_addition(const GroupSpec& g, std::vector<Point> generators, std::vector<bool> full) {
  Subgroup<Point> h;
  h.parent = g;
  h.full = full.empty() ? std::vector<bool>(g.arity(), false) : std::move(full);
  if (h.full.size() != g.arity()) throw Error("full-factor mask arity mismatch");
  for (std::size_t i = 0; i < g.arity(); ++i)
    if (h.full[i] && g[i].finite()) throw Error("only infinite factors can be marked as fully contained");

  std::set<Point> seen;
  std::vector<Point> frontier{h.finite_part(zero_like(g, Point{}))};
  seen.insert(frontier.front());
  std::vector<Point> gens;
  for (auto& x : generators) gens.push_back(h.finite_part(x));
  while (!frontier.empty()) {
    std::vector<Point> next;
    for (const auto& x : frontier)
      for (const auto& y : gens) {
        Point z = group_op(g, x, y);
        if (seen.insert(z).second) next.push_back(std::move(z));
      }
    frontier = std::move(next);
  }
  h.generators = std::move(generators);
  h.elements.assign(seen.begin(), seen.end());
  return h;
}

}  // namespace detail

// Smallest subgroup containing the generators. Integer-line factors listed in
// `full_factors` are contained entirely; any other nonzero integer-line
// coordinate would generate an infinite cyclic subgroup and is rejected.
inline SubgroupData subgroup_closure(const GroupSpec& g, const std::vector<Element>& generators,
                                     const std::vector<std::size_t>& full_factors = {}) {
  std::vector<bool> full(g.arity(), false);
  for (auto i : full_factors) {
    if (i >= g.arity()) throw Error("full factor index out of range");
    full[i] = true;
  }
  for (const auto& x : generators) {
    if (!contains(g, x)) throw Error("generator " + to_string(x) + " does not belong to " + g.to_string());
    for (std::size_t i = 0; i < g.arity(); ++i)
      if (!g[i].finite() && !full[i] && x[i] != 0)
        throw Error("closure of " + to_string(x) + " is infinite (nonzero integer-line coordinate)");
  }
  return detail::close_under_addition(g, generators, full);
}

// Dual-side closure; torus coordinates are rationals and always have finite order.
inline DualSubgroup dual_subgroup_closure(const GroupSpec& g, const std::vector<DualElement>& generators,
                                          const std::vector<std::size_t>& full_factors = {}) {
  std::vector<bool> full(g.arity(), false);
  for (auto i : full_factors) {
    if (i >= g.arity()) throw Error("full factor index out of range");
    full[i] = true;
  }
  for (const auto& x : generators)
    if (!contains(g, x)) throw Error("dual generator does not belong to the dual of " + g.to_string());
  return detail::close_under_addition(g, generators, full);
}

inline SubgroupData trivial_subgroup(const GroupSpec& g) { return subgroup_closure(g, {}); }

inline SubgroupData whole_group(const GroupSpec& g) {
  std::vector<Element> gens;
  std::vector<std::size_t> full;
  for (std::size_t i = 0; i < g.arity(); ++i) {
    if (g[i].finite()) {
      Element e = zero(g);
      e.c[i] = g[i].order > 1 ? 1 : 0;
      gens.push_back(e);
    } else {
      full.push_back(i);
    }
  }
  return subgroup_closure(g, gens, full);
}

// {xi : <x, xi> = 1 for all x in h}. The finite part is found by scanning the
// dual of the finite factors; an integer-line coordinate contained in h forces
// the torus coordinate to 0, an absent one leaves the torus coordinate free.
inline DualSubgroup annihilator(const GroupSpec& g, const SubgroupData& h) {
  if (!(h.parent == g)) throw Error("subgroup does not belong to the given group");
  DualSubgroup a;
  a.parent = g;
  a.full.assign(g.arity(), false);
  for (std::size_t i = 0; i < g.arity(); ++i)
    if (!g[i].finite()) a.full[i] = !h.full[i];
  for (auto& xi : enumerate_dual_finite(g)) {
    const bool kills = std::all_of(h.elements.begin(), h.elements.end(),
                                   [&](const Element& x) { return pairs_trivially(g, x, xi); });
    if (kills) a.elements.push_back(std::move(xi));
  }
  a.generators = a.elements;
  return a;
}

// {x : <x, xi> = 1 for all xi in h}, identifying G with the dual of its dual.
inline SubgroupData annihilator(const GroupSpec& g, const DualSubgroup& h) {
  if (!(h.parent == g)) throw Error("subgroup does not belong to the given group");
  for (std::size_t i = 0; i < g.arity(); ++i) {
    if (g[i].finite() || h.full[i]) continue;
    for (const auto& xi : h.elements)
      if (xi[i].num != 0) throw Error("unsupported dual subgroup shape: nontrivial finite torus coordinate");
  }
  SubgroupData a;
  a.parent = g;
  a.full.assign(g.arity(), false);
  for (std::size_t i = 0; i < g.arity(); ++i)
    if (!g[i].finite()) a.full[i] = !h.full[i];
  for (auto& x : enumerate_finite(g)) {
    const bool kills = std::all_of(h.elements.begin(), h.elements.end(),
                                   [&](const DualElement& xi) { return pairs_trivially(g, x, xi); });
    if (kills) a.elements.push_back(std::move(x));
  }
  a.generators = a.elements;
  return a;
}

// ---------------------------------------------------------------------------
// Sections

// One canonical (minimal) representative per coset of `subgroup`.
template <class Point>
struct CosetSection {
  Subgroup<Point> subgroup;
  std::vector<Point> representatives;

  // Index into `representatives` of the coset containing x.
  std::size_t coset_index(const Point& x) const {
    auto it = index_.find(subgroup.finite_part(x));
    if (it == index_.end()) throw Error("point is outside the enumerated quotient");
    return it->second;
  }

  std::size_t size() const noexcept { return representatives.size(); }

  std::map<Point, std::size_t> index_;
};

namespace detail {

inline std::vector<Element> finite_points(const GroupSpec& g, const Element&) { return enumerate_finite(g); }
inline std::vector<DualElement> finite_points(const GroupSpec& g, const DualElement&) {
  return enumerate_dual_finite(g);
}

template <class Point>
CosetSection<Point> make_section(const GroupSpec& g, const Subgroup<Point>& h) {
  if (!(h.parent == g)) throw Error("subgroup does not belong to the given group");
  for (std::size_t i = 0; i < g.arity(); ++i)
    if (!g[i].finite() && !h.full[i]) throw Error("quotient is infinite: subgroup does not contain infinite factor " +
                                                  std::to_string(i));
  CosetSection<Point> c;
  c.subgroup = h;
  // enumerate_* returns points in canonical order, so the first point seen
  // in each coset is its minimal element.
  for (const auto& x : finite_points(g, Point{})) {
    if (c.index_.count(x)) continue;
    const std::size_t idx = c.representatives.size();
    c.representatives.push_back(x);
    for (const auto& y : h.elements) c.index_.emplace(group_op(g, x, y), idx);
  }
  return c;
}

}  // namespace detail

inline CosetSection<Element> coset_section(const GroupSpec& g, const SubgroupData& h) {
  return detail::make_section(g, h);
}

inline CosetSection<DualElement> coset_section(const GroupSpec& g, const DualSubgroup& h) {
  return detail::make_section(g, h);
}

// True iff `points` contains exactly one element of every coset of h.
template <class Point>
bool is_section(const GroupSpec& g, const Subgroup<Point>& h, const std::vector<Point>& points) {
  const auto canonical = detail::make_section(g, h);
  if (points.size() != canonical.size()) return false;
  std::vector<bool> hit(canonical.size(), false);
  for (const auto& p : points) {
    if (!contains(g, p)) return false;
    const auto i = canonical.coset_index(p);
    if (hit[i]) return false;
    hit[i] = true;
  }
  return true;
}

// First member of an increasing chain containing every point of s.
inline const SubgroupData& minimal_chain_member(const std::vector<SubgroupData>& chain, const std::vector<Element>& s) {
  if (chain.empty()) throw Error("empty subgroup chain");
  for (std::size_t i = 1; i < chain.size(); ++i)
    for (const auto& x : chain[i - 1].elements)
      if (!chain[i].contains(x)) throw Error("subgroup chain is not increasing at position " + std::to_string(i));
  for (const auto& h : chain)
    if (std::all_of(s.begin(), s.end(), [&](const Element& x) { return h.contains(x); })) return h;
  throw Error("no chain member contains the requested set");
}

// Every subgroup of a finite group, sorted by order then elements.
inline std::vector<SubgroupData> all_subgroups(const GroupSpec& g) {
  if (!g.finite()) throw Error("subgroup enumeration requires a finite group");
  const auto points = enumerate_finite(g);
  std::set<std::vector<Element>> seen;
  std::vector<SubgroupData> found{trivial_subgroup(g)};
  seen.insert(found.front().elements);
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (const auto& x : points) {
      if (found[i].contains(x)) continue;
      auto gens = found[i].generators;
      gens.push_back(x);
      auto h = subgroup_closure(g, gens);
      if (seen.insert(h.elements).second) found.push_back(std::move(h));
    }
  }
  std::sort(found.begin(), found.end(), [](const SubgroupData& a, const SubgroupData& b) {
    return a.elements.size() != b.elements.size() ? a.elements.size() < b.elements.size() : a.elements < b.elements;
  });
  return found;
}

// ---------------------------------------------------------------------------
// Haar normalisation

// Mass of a single point of G and of the dual. For a compact-open H of the
// finite factors, m_G(H) = 1 and m(H^perp) = 1; integer lines carry counting
// measure and tori total mass 1.
struct HaarWeights {
  double primal_weight = 1.0;
  double dual_weight = 1.0;

  friend bool operator==(const HaarWeights&, const HaarWeights&) = default;
};

inline HaarWeights haar_weights(const GroupSpec& g, const SubgroupData& h) {
  if (!h.finite()) throw Error("Haar normalisation needs a compact subgroup (no integer-line factor)");
  const auto perp = annihilator(g, h);
  return {1.0 / static_cast<double>(h.elements.size()), 1.0 / static_cast<double>(perp.elements.size())};
}

}  // namespace lcapr
