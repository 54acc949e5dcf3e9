#pragma once

// Finitely supported functions on G and on its dual, the Fourier transform
// under the m_G(H) = 1 normalisation, Paley-Wiener sampling and the
// uniqueness-set rank oracle.

#include <lcapr/linalg.hpp>
#include <lcapr/subgroup.hpp>

#include <map>

namespace lcapr {

// A finitely supported complex function on G (Point = Element) or on the dual
// (Point = DualElement). Immutable after construction.
template <class Point>
class BasicSignal {
 public:
  BasicSignal() = default;

  BasicSignal(GroupSpec group, std::vector<Point> support, std::vector<cplx> values, HaarWeights weights)
      : group_(std::move(group)), support_(std::move(support)), values_(std::move(values)), weights_(weights) {
    if (support_.size() != values_.size()) throw Error("signal support and values differ in length");
    for (std::size_t i = 0; i < support_.size(); ++i) {
      if (!contains(group_, support_[i])) throw Error("signal support point outside the group");
      if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag()))
        throw Error("signal values must be finite");
      if (!index_.emplace(support_[i], i).second) throw Error("signal support points must be distinct");
    }
  }

  const GroupSpec& group() const noexcept { return group_; }
  const std::vector<Point>& support() const noexcept { return support_; }
  const std::vector<cplx>& values() const noexcept { return values_; }
  const HaarWeights& weights() const noexcept { return weights_; }

  // Mass of one point on this side of the duality.
  double weight() const noexcept {
    if constexpr (std::is_same_v<Point, Element>) return weights_.primal_weight;
    else return weights_.dual_weight;
  }

  cplx operator()(const Point& x) const {
    auto it = index_.find(x);
    return it == index_.end() ? cplx{} : values_[it->second];
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& v : values_) s += std::norm(v);
    return weight() * s;
  }
  double norm() const { return std::sqrt(norm_squared()); }

 private:
  GroupSpec group_;
  std::vector<Point> support_;
  std::vector<cplx> values_;
  HaarWeights weights_;
  std::map<Point, std::size_t> index_;
};

using Signal = BasicSignal<Element>;
using DualSignal = BasicSignal<DualElement>;

// Same support, values mapped pointwise.
template <class Point, class Fn>
BasicSignal<Point> map_values(const BasicSignal<Point>& f, Fn fn) {
  std::vector<cplx> v;
  v.reserve(f.values().size());
  for (std::size_t i = 0; i < f.values().size(); ++i) v.push_back(fn(f.support()[i], f.values()[i]));
  return BasicSignal<Point>(f.group(), f.support(), std::move(v), f.weights());
}

inline Signal indicator(const GroupSpec& g, const std::vector<Element>& set, HaarWeights w) {
  return Signal(g, set, std::vector<cplx>(set.size(), cplx{1.0, 0.0}), w);
}

inline DualSignal dual_indicator(const GroupSpec& g, const std::vector<DualElement>& set, HaarWeights w) {
  return DualSignal(g, set, std::vector<cplx>(set.size(), cplx{1.0, 0.0}), w);
}

// Indicator of the coset H + x.
inline Signal coset_indicator(const GroupSpec& g, const SubgroupData& h, const Element& x, HaarWeights w) {
  if (!h.finite()) throw Error("coset indicator needs a finite subgroup");
  std::vector<Element> pts;
  for (const auto& y : h.elements) pts.push_back(group_op(g, x, y));
  return indicator(g, pts, w);
}

// ---------------------------------------------------------------------------
// Fourier transform

// f^(xi) = m * sum_t f(t) conj(<t, xi>) at the requested characters.
inline DualSignal fourier(const Signal& f, const std::vector<DualElement>& points) {
  std::vector<cplx> out(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    cplx acc{};
    for (std::size_t i = 0; i < f.support().size(); ++i)
      acc += f.values()[i] * std::conj(pairing(f.group(), f.support()[i], points[j]));
    out[j] = f.weights().primal_weight * acc;
  }
  return DualSignal(f.group(), points, std::move(out), f.weights());
}

// Transform on the whole dual of a finite group.
inline DualSignal fourier(const Signal& f) {
  if (!f.group().finite())
    throw Error("fourier: the dual of " + f.group().to_string() + " is infinite; pass explicit evaluation points");
  return fourier(f, enumerate_dual_finite(f.group()));
}

// f(t) = m^ * sum_xi F(xi) <t, xi> at the requested points.
inline Signal inverse_fourier(const DualSignal& F, const std::vector<Element>& points) {
  std::vector<cplx> out(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    cplx acc{};
    for (std::size_t i = 0; i < F.support().size(); ++i)
      acc += F.values()[i] * pairing(F.group(), points[j], F.support()[i]);
    out[j] = F.weights().dual_weight * acc;
  }
  return Signal(F.group(), points, std::move(out), F.weights());
}

inline Signal inverse_fourier(const DualSignal& F) {
  if (!F.group().finite())
    throw Error("inverse_fourier: " + F.group().to_string() + " is infinite; pass explicit evaluation points");
  return inverse_fourier(F, enumerate_finite(F.group()));
}

// ---------------------------------------------------------------------------
// Paley-Wiener spaces

// PW_{H^perp} consists of the functions constant on cosets of H, so the
// values on a section determine f = sum_c f(c) chi_{H+c}.
inline Signal pw_sample_reconstruct(const GroupSpec& g, const SubgroupData& h, const std::vector<Element>& points,
                                    const std::vector<cplx>& samples, HaarWeights w) {
  if (!g.finite()) throw Error("pw_sample_reconstruct: group must be finite");
  if (points.size() != samples.size()) throw Error("pw_sample_reconstruct: points and samples differ in length");
  if (!is_section(g, h, points)) throw Error("pw_sample_reconstruct: sample points are not a section of G/H");
  const auto canonical = coset_section(g, h);
  std::vector<cplx> by_coset(canonical.size());
  for (std::size_t i = 0; i < points.size(); ++i) by_coset[canonical.coset_index(points[i])] = samples[i];
  const auto all = enumerate_finite(g);
  std::vector<cplx> values;
  values.reserve(all.size());
  for (const auto& x : all) values.push_back(by_coset[canonical.coset_index(x)]);
  return Signal(g, all, std::move(values), w);
}

// (<p, q>) with rows indexed by points and columns by frequencies. Works in
// both directions: points in G with frequencies in the dual, or points in the
// dual with frequencies in G.
template <class P, class Q>
Matrix character_matrix(const GroupSpec& g, const std::vector<P>& points, const std::vector<Q>& freqs) {
  Matrix m(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(freqs.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < freqs.size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pairing(g, points[i], freqs[j]);
  return m;
}

struct UniquenessVerdict {
  bool is_unique = false;
  Eigen::Index rank = 0;
  double condition = std::numeric_limits<double>::infinity();
};

// PW_omega is the span of the characters in omega, so upsilon is a uniqueness
// set exactly when the evaluation matrix has full column rank.
template <class P, class Q>
UniquenessVerdict uniqueness_rank_oracle(const GroupSpec& g, const std::vector<P>& upsilon, const std::vector<Q>& omega) {
  if (omega.empty()) throw Error("uniqueness_rank_oracle: empty spectrum");
  UniquenessVerdict v;
  if (upsilon.empty()) return v;
  const auto info = rank_info(character_matrix(g, upsilon, omega), oracle_rank_tol);
  v.rank = info.rank;
  v.is_unique = info.rank == static_cast<Eigen::Index>(omega.size());
  if (v.is_unique) v.condition = info.condition;
  return v;
}

// Shift every frequency by xi (modulation on the other side).
template <class Q>
std::vector<Q> shift_spectrum(const GroupSpec& g, const std::vector<Q>& omega, const Q& xi) {
  std::vector<Q> out;
  out.reserve(omega.size());
  for (const auto& w : omega) out.push_back(group_op(g, w, xi));
  return out;
}

// K - K, sorted and deduplicated.
inline std::vector<Element> difference_set(const GroupSpec& g, const std::vector<Element>& k) {
  std::set<Element> s;
  for (const auto& a : k)
    for (const auto& b : k) s.insert(subtract(g, a, b));
  return {s.begin(), s.end()};
}

}  // namespace lcapr
