#pragma once

// Phase retrieval from |V_g f(Λ × Γ)| for f supported in a finite K:
//
//  1. For each λ, |V_g f(λ, ·)|^2 lies in PW_{K-K} of the dual; its samples
//     on a uniqueness set Γ determine the coefficients
//       A_λ(s) = sum_t f(t) conj(f(t-s)) T_λ g_s(t),   s in K - K.
//  2. For each s, injectivity of C(g, s) recovers F_s(t) = f(t) conj(f(t-s)).
//  3. M[t, t'] = F_{t-t'}(t) = f(t) conj(f(t')) is rank one; its leading
//     eigenpair gives f up to a unimodular factor.

#include <lcapr/sets.hpp>

#include <Eigen/Eigenvalues>

#include <chrono>

namespace lcapr {

// |V_g f| on Λ × Γ.
inline PhaselessGrid forward_phaseless(const Signal& f, const Signal& g, const std::vector<Element>& lambda,
                                       const std::vector<DualElement>& gamma) {
  PhaselessGrid grid{lambda, gamma, {}};
  grid.magnitudes.reserve(lambda.size() * gamma.size());
  for (const auto& x : lambda)
    for (const auto& xi : gamma) grid.magnitudes.push_back(std::abs(stft(f, g, x, xi)));
  return grid;
}

// Additive Gaussian noise on the magnitudes, clipped at zero.
inline PhaselessGrid add_magnitude_noise(PhaselessGrid grid, double sigma, std::uint64_t seed) {
  if (sigma <= 0.0) return grid;
  for (std::size_t i = 0; i < grid.magnitudes.size(); ++i)
    grid.magnitudes[i] = std::max(0.0, grid.magnitudes[i] + sigma * stream_normal(seed, 0x6e6f697365ULL, i));
  return grid;
}

// A_λ(s), one row per λ, one column per s.
struct AutocorrCoefficients {
  std::vector<Element> shifts;
  Matrix values;
  double condition = std::numeric_limits<double>::infinity();
};

// Solves |V_g f(λ, γ)|^2 = m^2 sum_{s in K-K} A_λ(s) conj(<s, γ>) for every λ.
inline AutocorrCoefficients autocorr_from_magnitudes(const GroupSpec& g, const HaarWeights& w,
                                                     const PhaselessGrid& grid,
                                                     const std::vector<Element>& k_minus_k) {
  const auto n_gamma = static_cast<Eigen::Index>(grid.gamma.size());
  const auto n_shift = static_cast<Eigen::Index>(k_minus_k.size());
  if (n_gamma < n_shift)
    throw RetrievalError(Stage::autocorrelation, "Gamma has " + std::to_string(n_gamma) + " points but dim PW_{K-K} = " +
                                                     std::to_string(n_shift) + "; Gamma cannot be a uniqueness set");
  const double m2 = w.primal_weight * w.primal_weight;
  Matrix system = m2 * character_matrix(g, grid.gamma, k_minus_k).conjugate();
  Matrix rhs(n_gamma, static_cast<Eigen::Index>(grid.lambda.size()));
  for (std::size_t i = 0; i < grid.lambda.size(); ++i)
    for (std::size_t j = 0; j < grid.gamma.size(); ++j) {
      const double q = grid.at(i, j);
      rhs(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = q * q;
    }
  auto ls = least_squares(system, rhs, solver_rank_tol);
  if (ls.info.rank < n_shift)
    throw RetrievalError(Stage::autocorrelation, "sampling system has rank " + std::to_string(ls.info.rank) + " < " +
                                                     std::to_string(n_shift) + "; Gamma is not a uniqueness set for PW_{K-K}");
  return {k_minus_k, ls.solution.transpose(), ls.info.condition};
}

// F_s for every s in K - K, each supported on K ∩ (s + K).
struct RelationFunctions {
  std::vector<Element> shifts;
  std::vector<Signal> functions;
  std::vector<double> conditions;

  // F_s, or the empty function when s is not in K - K.
  Signal relation(const Element& s) const {
    auto it = std::find(shifts.begin(), shifts.end(), s);
    if (it == shifts.end()) {
      const auto& any = functions.front();
      return Signal(any.group(), {}, {}, any.weights());
    }
    return functions[static_cast<std::size_t>(it - shifts.begin())];
  }
};

// Unknowns of the s-th system: t in K with t - s in K.
inline std::vector<Element> relation_support(const GroupSpec& g, const std::vector<Element>& k_set, const Element& s) {
  const std::set<Element> k(k_set.begin(), k_set.end());
  std::vector<Element> out;
  for (const auto& t : k_set)
    if (k.count(subtract(g, t, s))) out.push_back(t);
  return out;
}

// m A_λ(s) = sum_t m T_λ g_s(t) F_s(t); the system matrix is the entrywise
// conjugate of C(g, s), which has the same singular values.
inline RelationFunctions solve_relations(const AutocorrCoefficients& acoeffs, const Signal& window,
                                         const std::vector<Element>& k_set, const std::vector<Element>& lambda) {
  const auto& g = window.group();
  const double m = window.weights().primal_weight;
  RelationFunctions rel;
  for (std::size_t si = 0; si < acoeffs.shifts.size(); ++si) {
    const Element& s = acoeffs.shifts[si];
    const auto support = relation_support(g, k_set, s);
    if (support.empty()) continue;
    const Matrix system = cgs_matrix(window, s, support, lambda).conjugate();
    const Matrix rhs = m * acoeffs.values.col(static_cast<Eigen::Index>(si));
    auto ls = least_squares(system, rhs, solver_rank_tol);
    if (ls.info.rank < static_cast<Eigen::Index>(support.size()))
      throw RetrievalError(Stage::relations, "C(g,s) is not injective on L^1(K) for s = " + to_string(s) + " (rank " +
                                                 std::to_string(ls.info.rank) + " < " + std::to_string(support.size()) +
                                                 ")");
    std::vector<cplx> values(ls.solution.data(), ls.solution.data() + ls.solution.size());
    rel.shifts.push_back(s);
    rel.functions.emplace_back(g, support, std::move(values), window.weights());
    rel.conditions.push_back(ls.info.condition);
  }
  return rel;
}

struct RankOneResult {
  Signal f_tilde;
  double residual = 0.0;
  // ||M - M*|| / ||M|| before symmetrisation.
  double asymmetry = 0.0;
};

inline Matrix relation_matrix(const RelationFunctions& rel, const GroupSpec& g, const std::vector<Element>& k_set) {
  const auto n = static_cast<Eigen::Index>(k_set.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& t = k_set[static_cast<std::size_t>(i)];
      const Element s = subtract(g, t, k_set[static_cast<std::size_t>(j)]);
      auto it = std::find(rel.shifts.begin(), rel.shifts.end(), s);
      if (it == rel.shifts.end()) throw RetrievalError(Stage::assemble, "missing relation function for s = " + to_string(s));
      m(i, j) = rel.functions[static_cast<std::size_t>(it - rel.shifts.begin())](t);
    }
  return m;
}

inline RankOneResult assemble_rank_one(const RelationFunctions& rel, const GroupSpec& g, const HaarWeights& w,
                                       const std::vector<Element>& k_set) {
  const Matrix m = relation_matrix(rel, g, k_set);
  const double norm = m.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw RetrievalError(Stage::assemble, "signal absent (M = 0)");
  RankOneResult out;
  out.asymmetry = (m - m.adjoint()).norm() / norm;
  const Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const Eigen::Index top = sym.rows() - 1;  // eigenvalues ascend
  const double sigma = eig.eigenvalues()(top);
  if (!(sigma > 0.0)) throw RetrievalError(Stage::assemble, "signal absent (leading eigenvalue <= 0)");
  Vector v = std::sqrt(sigma) * eig.eigenvectors().col(top);
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  v *= std::conj(v(arg)) / std::abs(v(arg));
  out.residual = (sym - v * v.adjoint()).norm() / sym.norm();
  out.f_tilde = Signal(g, k_set, std::vector<cplx>(v.data(), v.data() + v.size()), w);
  return out;
}

// min over |c| = 1 of ||f - c f~|| / ||f||, attained at c = phase(<f, f~>).
// Evaluated as a direct residual; the expanded form ||f||^2 + ||f~||^2 - 2|<f, f~>|
// cancels down to sqrt(eps) ~ 1e-8 for near-identical inputs.
inline double align_and_score(const Signal& f, const Signal& f_tilde) {
  std::set<Element> universe(f.support().begin(), f.support().end());
  universe.insert(f_tilde.support().begin(), f_tilde.support().end());
  double ff = 0.0;
  cplx cross{};
  for (const auto& x : universe) {
    ff += std::norm(f(x));
    cross += f(x) * std::conj(f_tilde(x));
  }
  if (!(ff > 0.0)) throw Error("align_and_score: reference signal is zero");
  const cplx c = std::abs(cross) > 0.0 ? cross / std::abs(cross) : cplx(1.0);
  double err2 = 0.0;
  for (const auto& x : universe) err2 += std::norm(f(x) - c * f_tilde(x));
  return std::sqrt(err2 / ff);
}

// ---------------------------------------------------------------------------
// Pipeline

struct RetrievalProblem {
  GroupSpec group;
  HaarWeights weights;
  std::vector<Element> k_set;
  Signal window;
  std::vector<Element> lambda;
  std::vector<DualElement> gamma;
};

struct StageTimings {
  double forward_ms = 0.0;
  double autocorrelation_ms = 0.0;
  double relations_ms = 0.0;
  double assemble_ms = 0.0;
};

struct RetrievalReport {
  std::uint64_t seed = 0;
  double noise = 0.0;
  double interpolation_condition = 0.0;
  std::vector<Element> shifts;
  std::vector<double> relation_conditions;
  double worst_condition = 0.0;
  double hermitian_asymmetry = 0.0;
  double rank_one_residual = 0.0;
  double recovery_error = 0.0;
  Signal f_tilde;
  StageTimings timings;
};

// Intermediate data, kept when the caller asks for matrix dumps.
struct StageDump {
  PhaselessGrid grid;
  AutocorrCoefficients autocorr;
  std::vector<std::pair<Element, Matrix>> cgs;
  Matrix relation_matrix;
};

namespace detail {

template <class Fn>
auto timed(double& ms, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = fn();
  ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace detail

// Inverse stages only, from a given grid.
inline RetrievalReport retrieve_from_grid(const RetrievalProblem& p, const PhaselessGrid& grid,
                                          StageDump* dump = nullptr) {
  RetrievalReport r;
  const auto diffs = difference_set(p.group, p.k_set);
  const auto ac = detail::timed(r.timings.autocorrelation_ms,
                                [&] { return autocorr_from_magnitudes(p.group, p.weights, grid, diffs); });
  r.interpolation_condition = ac.condition;
  const auto rel = detail::timed(r.timings.relations_ms, [&] { return solve_relations(ac, p.window, p.k_set, p.lambda); });
  r.shifts = rel.shifts;
  r.relation_conditions = rel.conditions;
  r.worst_condition = ac.condition;
  for (double c : rel.conditions) r.worst_condition = std::max(r.worst_condition, c);
  const auto rk = detail::timed(r.timings.assemble_ms, [&] { return assemble_rank_one(rel, p.group, p.weights, p.k_set); });
  r.hermitian_asymmetry = rk.asymmetry;
  r.rank_one_residual = rk.residual;
  r.f_tilde = rk.f_tilde;
  if (dump) {
    dump->grid = grid;
    dump->autocorr = ac;
    dump->cgs.clear();
    for (const auto& s : rel.shifts) dump->cgs.emplace_back(s, cgs_matrix(p.window, s, p.k_set, p.lambda));
    dump->relation_matrix = relation_matrix(rel, p.group, p.k_set);
  }
  return r;
}

// Forward measurement, optional noise, the three inverse stages and scoring.
inline RetrievalReport end_to_end(const RetrievalProblem& p, const Signal& f, double noise = 0.0,
                                  std::uint64_t noise_seed = 0, StageDump* dump = nullptr) {
  if (!(f.group() == p.group)) throw RetrievalError(Stage::setup, "signal group differs from problem group");
  const std::set<Element> k(p.k_set.begin(), p.k_set.end());
  for (std::size_t i = 0; i < f.support().size(); ++i)
    if (f.values()[i] != cplx{} && !k.count(f.support()[i]))
      throw RetrievalError(Stage::setup, "signal is not supported in K (point " + to_string(f.support()[i]) + ")");
  double forward_ms = 0.0;
  auto grid = detail::timed(forward_ms, [&] { return forward_phaseless(f, p.window, p.lambda, p.gamma); });
  grid = add_magnitude_noise(std::move(grid), noise, noise_seed);
  auto r = retrieve_from_grid(p, grid, dump);
  r.timings.forward_ms = forward_ms;
  r.noise = noise;
  r.recovery_error = align_and_score(f, r.f_tilde);
  return r;
}

}  // namespace lcapr
