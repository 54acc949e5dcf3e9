#pragma once

// Translation, modulation, the short-time Fourier transform and the
// autocorrelation operators C(g, s).

#include <lcapr/harmonic.hpp>

namespace lcapr {

// (T_x f)(y) = f(y - x)
inline Signal translate(const Signal& f, const Element& x) {
  std::vector<Element> support;
  support.reserve(f.support().size());
  for (const auto& t : f.support()) support.push_back(group_op(f.group(), t, x));
  return Signal(f.group(), std::move(support), f.values(), f.weights());
}

// (M_xi f)(y) = <y, xi> f(y)
inline Signal modulate(const Signal& f, const DualElement& xi) {
  return map_values(f, [&](const Element& y, cplx v) { return pairing(f.group(), y, xi) * v; });
}

inline void check_compatible(const Signal& f, const Signal& g) {
  if (!(f.group() == g.group())) throw Error("signals live on different groups");
  if (!(f.weights() == g.weights())) throw Error("signals carry different Haar weights");
}

// V_g f(x, xi) = <f, M_xi T_x g> = m * sum_t f(t) conj(g(t - x)) conj(<t, xi>)
inline cplx stft(const Signal& f, const Signal& g, const Element& x, const DualElement& xi) {
  check_compatible(f, g);
  cplx acc{};
  for (std::size_t i = 0; i < f.support().size(); ++i) {
    const auto& t = f.support()[i];
    const cplx w = g(subtract(f.group(), t, x));
    if (w == cplx{}) continue;
    acc += f.values()[i] * std::conj(w) * std::conj(pairing(f.group(), t, xi));
  }
  return f.weights().primal_weight * acc;
}

inline std::vector<cplx> stft(const Signal& f, const Signal& g,
                              const std::vector<std::pair<Element, DualElement>>& points) {
  std::vector<cplx> out;
  out.reserve(points.size());
  for (const auto& [x, xi] : points) out.push_back(stft(f, g, x, xi));
  return out;
}

// |V_g f| on the rectangular grid lambda x gamma, row-major in lambda.
struct PhaselessGrid {
  std::vector<Element> lambda;
  std::vector<DualElement> gamma;
  std::vector<double> magnitudes;

  double at(std::size_t i, std::size_t j) const { return magnitudes[i * gamma.size() + j]; }
};

// g_s = conj(g) T_s g, supported on supp(g) ∩ (supp(g) + s).
struct WindowAutocorr {
  Element shift;
  Signal values;
};

inline WindowAutocorr window_autocorr(const Signal& g, const Element& s) {
  std::vector<Element> support;
  std::vector<cplx> values;
  for (std::size_t i = 0; i < g.support().size(); ++i) {
    const auto& y = g.support()[i];
    const cplx shifted = g(subtract(g.group(), y, s));
    if (shifted == cplx{}) continue;
    support.push_back(y);
    values.push_back(std::conj(g.values()[i]) * shifted);
  }
  return {s, Signal(g.group(), std::move(support), std::move(values), g.weights())};
}

// (T_lambda g_s)(t) = g_s(t - lambda), evaluated without materialising g_s.
inline cplx translated_autocorr(const Signal& g, const Element& s, const Element& lambda, const Element& t) {
  const auto& grp = g.group();
  const Element y = subtract(grp, t, lambda);
  return std::conj(g(y)) * g(subtract(grp, y, s));
}

// Rows t in K, columns lambda in Lambda: the system {T_lambda g_s} restricted to K.
inline Matrix translate_system_matrix(const Signal& g, const Element& s, const std::vector<Element>& k_set,
                                      const std::vector<Element>& lambda) {
  Matrix m(static_cast<Eigen::Index>(k_set.size()), static_cast<Eigen::Index>(lambda.size()));
  for (std::size_t i = 0; i < k_set.size(); ++i)
    for (std::size_t j = 0; j < lambda.size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = translated_autocorr(g, s, lambda[j], k_set[i]);
  return m;
}

// C(g, s): rows lambda, columns t in K, entries m * conj(T_lambda g_s(t)), so
// C(g, s) h = (int_K h conj(T_lambda g_s))_lambda on raw value vectors.
inline Matrix cgs_matrix(const Signal& g, const Element& s, const std::vector<Element>& k_set,
                         const std::vector<Element>& lambda) {
  if (k_set.empty() || lambda.empty()) throw Error("cgs_matrix: empty K or Lambda");
  return g.weights().primal_weight * translate_system_matrix(g, s, k_set, lambda).adjoint();
}

}  // namespace lcapr
