#pragma once

// JSON records and CSV tables.

#include <lcapr/config.hpp>
#include <lcapr/retrieval.hpp>

#include <filesystem>
#include <charconv>

namespace lcapr {

inline json to_json(const Element& x) { return json(x.c); }

// Residues on cyclic factors, "p/q" on torus factors.
inline json to_json(const GroupSpec& g, const DualElement& xi) {
  json out = json::array();
  for (std::size_t i = 0; i < g.arity(); ++i) {
    if (g[i].finite())
      out.push_back(xi.c[i].num);
    else
      out.push_back(std::to_string(xi.c[i].num) + "/" + std::to_string(xi.c[i].den));
  }
  return out;
}

inline json to_json(const GroupSpec& g) {
  json out = json::array();
  for (std::size_t i = 0; i < g.arity(); ++i) out.push_back(g[i].finite() ? "Z/" + std::to_string(g[i].order) : "Z");
  return out;
}

inline json points_json(const std::vector<Element>& pts) {
  json out = json::array();
  for (const auto& x : pts) out.push_back(to_json(x));
  return out;
}

inline json points_json(const GroupSpec& g, const std::vector<DualElement>& pts) {
  json out = json::array();
  for (const auto& x : pts) out.push_back(to_json(g, x));
  return out;
}

// JSON has no infinity; unbounded condition numbers are written as null.
inline json number_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const Signal& f, const std::vector<Element>& designated_h = {}) {
  json values = json::array();
  for (const auto& v : f.values()) values.push_back({v.real(), v.imag()});
  json out{{"group", to_json(f.group())},
           {"support", points_json(f.support())},
           {"values", values},
           {"haar", {{"primal", f.weights().primal_weight}, {"dual", f.weights().dual_weight}}}};
  if (!designated_h.empty()) out["subgroup"] = points_json(designated_h);
  return out;
}

inline Signal signal_from_json(const json& j) {
  std::vector<std::string> factors = j.at("group").get<std::vector<std::string>>();
  const auto g = GroupSpec::parse(factors);
  std::vector<Element> support;
  for (const auto& x : j.at("support")) support.push_back(element_from_json(g, x));
  std::vector<cplx> values;
  for (const auto& v : j.at("values")) values.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
  HaarWeights w;
  if (j.contains("haar")) w = {j["haar"].at("primal").get<double>(), j["haar"].at("dual").get<double>()};
  return Signal(g, std::move(support), std::move(values), w);
}

template <class P, class Q>
json certificate_json(const GroupSpec& g, const UniquenessCertificate<P, Q>& c) {
  auto pts = [&](const auto& v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::vector<Element>>)
      return points_json(v);
    else
      return points_json(g, v);
  };
  return {{"kind", "uniqueness"},
          {"points", pts(c.points)},
          {"spectrum", pts(c.spectrum)},
          {"rank", c.rank},
          {"valid", c.valid()},
          {"condition", number_json(c.condition)},
          {"separated", c.separated},
          {"separation_radius", c.separation_radius}};
}

inline json certificate_json(const CompletenessCertificate& c) {
  return {{"kind", "completeness"},
          {"window", c.window_id},
          {"shift", to_json(c.shift)},
          {"k", points_json(c.k_set)},
          {"lambda", points_json(c.lambda)},
          {"rank", c.rank},
          {"complete", c.complete()},
          {"condition", number_json(c.condition)}};
}

inline json report_json(const RetrievalReport& r, bool with_timings, bool with_signal) {
  json shifts = json::array();
  for (std::size_t i = 0; i < r.shifts.size(); ++i)
    shifts.push_back({{"s", to_json(r.shifts[i])}, {"condition", number_json(r.relation_conditions[i])}});
  json out{{"seed", r.seed},
           {"noise", r.noise},
           {"status", "ok"},
           {"interpolation_condition", number_json(r.interpolation_condition)},
           {"relation_conditions", shifts},
           {"worst_condition", number_json(r.worst_condition)},
           {"hermitian_asymmetry", r.hermitian_asymmetry},
           {"rank_one_residual", r.rank_one_residual},
           {"recovery_error", r.recovery_error}};
  if (with_signal) out["f_tilde"] = to_json(r.f_tilde);
  if (with_timings)
    out["timings_ms"] = {{"forward", r.timings.forward_ms},
                         {"autocorrelation", r.timings.autocorrelation_ms},
                         {"relations", r.timings.relations_ms},
                         {"assemble", r.timings.assemble_ms}};
  return out;
}

inline json error_json(const std::exception& e) {
  json out{{"message", e.what()}};
  if (auto* re = dynamic_cast<const RetrievalError*>(&e)) {
    out["type"] = "retrieval";
    out["stage"] = stage_name(re->stage());
    out["stage_number"] = stage_number(re->stage());
  } else if (auto* pe = dynamic_cast<const ParseError*>(&e)) {
    out["type"] = "parse";
    out["field"] = pe->field();
    out["line"] = pe->line();
  } else {
    out["type"] = "error";
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

// Shortest representation that round-trips.
inline std::string csv_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write `" + path.string() + "`");
  out << text;
  if (!out) throw Error("write failed for `" + path.string() + "`");
}

// One row per (λ, γ).
inline std::string grid_csv(const GroupSpec& g, const PhaselessGrid& grid) {
  std::ostringstream os;
  os << "lambda,gamma,magnitude\n";
  for (std::size_t i = 0; i < grid.lambda.size(); ++i)
    for (std::size_t j = 0; j < grid.gamma.size(); ++j)
      os << '"' << to_string(grid.lambda[i]) << "\",\"" << to_string(g, grid.gamma[j]) << "\","
         << csv_number(grid.at(i, j)) << '\n';
  return os.str();
}

// row,col,re,im for every entry.
inline std::string matrix_csv(const Matrix& m) {
  std::ostringstream os;
  os << "row,col,re,im\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << i << ',' << j << ',' << csv_number(m(i, j).real()) << ',' << csv_number(m(i, j).imag()) << '\n';
  return os.str();
}

}  // namespace lcapr
