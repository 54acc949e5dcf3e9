#pragma once

// Experiment configuration: INI-style sections, one `key = value` per line,
// every value a JSON literal. See README for the full grammar.

#include <lcapr/error.hpp>
#include <lcapr/group.hpp>

#include <json.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace lcapr {

using json = nlohmann::json;

enum class WindowKind { steinhaus, gaussian };
enum class PointMode { explicit_list, auto_section, auto_greedy, auto_chain };

inline std::string mode_name(PointMode m) {
  switch (m) {
    case PointMode::explicit_list: return "explicit";
    case PointMode::auto_section: return "auto-section";
    case PointMode::auto_greedy: return "auto-greedy";
    case PointMode::auto_chain: return "auto-chain";
  }
  return "?";
}

// (kind, mu, eta, eta0) with kind "quartic" or "pair"; indices into the
// canonical enumeration of the characters of H.
struct LlnCase {
  std::string kind;
  std::size_t mu = 0, eta = 0, eta0 = 0;
};

struct ExperimentConfig {
  std::string path;
  std::string text;

  GroupSpec group;
  std::vector<Element> generators;
  std::vector<std::vector<Element>> chain;
  bool k_is_h = true;
  std::vector<Element> k_set;

  WindowKind window = WindowKind::steinhaus;
  std::optional<std::vector<double>> coeffs;  // empty: default profile
  std::int64_t enumeration_radius = 400;

  PointMode lambda_mode = PointMode::auto_section;
  std::vector<Element> lambda;
  std::size_t lambda_count = 0;  // auto-greedy on discrete groups; 0 picks |K| + 4
  PointMode gamma_mode = PointMode::auto_section;
  std::vector<DualElement> gamma;

  std::vector<std::uint64_t> seeds{0};
  std::uint64_t signal_offset = 1000000;
  std::vector<double> noise{0.0};
  double tolerance = 1e-6;
  double condition_cap = 1e6;

  std::string verify_what = "uniqueness";
  std::size_t drop_gamma = 0;

  std::vector<LlnCase> lln_cases;  // empty: every case
  std::vector<std::size_t> lln_n{100, 1000, 20000};
};

namespace detail {

struct RawValue {
  json value;
  int line = 0;
};

using RawConfig = std::map<std::string, RawValue>;

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline RawConfig parse_raw(const std::string& text) {
  RawConfig out;
  std::istringstream in(text);
  std::string line, section;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError("section", no, "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ParseError("section", no, "empty section name");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("line", no, "expected `key = value`");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ParseError("line", no, "missing key");
    if (section.empty()) throw ParseError(key, no, "key outside of any section");
    const std::string field = section + "." + key;
    json v;
    try {
      v = json::parse(trim(t.substr(eq + 1)));
    } catch (const json::parse_error&) {
      throw ParseError(field, no, "value is not a JSON literal: " + trim(t.substr(eq + 1)));
    }
    if (out.count(field)) throw ParseError(field, no, "duplicate key");
    out[field] = {std::move(v), no};
  }
  return out;
}

// Typed access with line-aware diagnostics; every key must be consumed.
class Reader {
 public:
  explicit Reader(RawConfig raw) : raw_(std::move(raw)) {}

  bool has(const std::string& f) const { return raw_.count(f) > 0; }
  int line(const std::string& f) const { return has(f) ? raw_.at(f).line : 0; }

  const json& get(const std::string& f) {
    auto it = raw_.find(f);
    if (it == raw_.end()) throw ParseError(f, 0, "missing required key");
    used_.insert(f);
    return it->second.value;
  }

  [[noreturn]] void fail(const std::string& f, const std::string& what) const { throw ParseError(f, line(f), what); }

  std::string string(const std::string& f) {
    const auto& v = get(f);
    if (!v.is_string()) fail(f, "expected a string");
    return v.get<std::string>();
  }
  double number(const std::string& f) {
    const auto& v = get(f);
    if (!v.is_number()) fail(f, "expected a number");
    return v.get<double>();
  }
  std::int64_t integer(const std::string& f) {
    const auto& v = get(f);
    if (!v.is_number_integer()) fail(f, "expected an integer");
    return v.get<std::int64_t>();
  }
  bool boolean(const std::string& f) {
    const auto& v = get(f);
    if (!v.is_boolean()) fail(f, "expected true or false");
    return v.get<bool>();
  }

  void check_all_used() const {
    for (const auto& [k, v] : raw_)
      if (!used_.count(k)) throw ParseError(k, v.line, "unknown key");
  }

 private:
  RawConfig raw_;
  std::set<std::string> used_;
};

}  // namespace detail

// Element as [x1, ..., xd]; a bare integer is accepted for one-factor groups.
inline Element element_from_json(const GroupSpec& g, const json& v) {
  std::vector<std::int64_t> c;
  if (v.is_number_integer()) {
    c.push_back(v.get<std::int64_t>());
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number_integer()) throw Error("element coordinates must be integers");
      c.push_back(x.get<std::int64_t>());
    }
  } else {
    throw Error("element must be an integer list");
  }
  return make_element(g, c);
}

// Dual coordinate: residue for Z/n, "p/q" or [p, q] on the torus.
inline DualCoord dual_coord_from_json(const Factor& f, const json& v) {
  if (v.is_number_integer()) {
    const auto x = v.get<std::int64_t>();
    return f.finite() ? DualCoord{detail::mod(x, f.order), f.order} : torus_coord(x, 1);
  }
  std::int64_t p = 0, q = 1;
  if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
    p = v[0].get<std::int64_t>();
    q = v[1].get<std::int64_t>();
  } else if (v.is_string()) {
    const auto s = v.get<std::string>();
    const auto slash = s.find('/');
    try {
      std::size_t used = 0;
      p = std::stoll(s.substr(0, slash), &used);
      if (used != s.substr(0, slash).size()) throw Error("bad numerator");
      if (slash != std::string::npos) {
        q = std::stoll(s.substr(slash + 1), &used);
        if (used != s.size() - slash - 1) throw Error("bad denominator");
      }
    } catch (const std::logic_error&) {
      throw Error("dual coordinate `" + s + "` is not p/q");
    }
  } else {
    throw Error("dual coordinate must be an integer, \"p/q\" or [p, q]");
  }
  if (f.finite()) {
    if (q != 1 && q != f.order) throw Error("cyclic dual coordinate must have denominator 1 or " + std::to_string(f.order));
    return {detail::mod(p, f.order), f.order};
  }
  return torus_coord(p, q);
}

inline DualElement dual_from_json(const GroupSpec& g, const json& v) {
  std::vector<DualCoord> c;
  if (!v.is_array() || (g.arity() == 1 && v.size() == 2 && v[0].is_number_integer() && !g[0].finite())) {
    c.push_back(dual_coord_from_json(g[0], v));
  } else {
    if (v.size() != g.arity())
      throw Error("dual element has " + std::to_string(v.size()) + " coordinates, group has " + std::to_string(g.arity()));
    for (std::size_t i = 0; i < g.arity(); ++i) c.push_back(dual_coord_from_json(g[i], v[i]));
  }
  return make_dual(g, c);
}

inline std::vector<std::uint64_t> parse_seed_spec(const json& v) {
  std::vector<std::uint64_t> out;
  if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number_unsigned()) throw Error("seeds must be nonnegative integers");
      out.push_back(x.get<std::uint64_t>());
    }
  } else if (v.is_object()) {
    if (!v.contains("count") || !v["count"].is_number_unsigned()) throw Error("seed range needs a nonnegative \"count\"");
    const std::uint64_t first = v.value("first", std::uint64_t{0});
    for (std::uint64_t i = 0; i < v["count"].get<std::uint64_t>(); ++i) out.push_back(first + i);
  } else if (v.is_number_unsigned()) {
    out.push_back(v.get<std::uint64_t>());
  } else {
    throw Error("seeds must be a list, a {\"first\", \"count\"} range or an integer");
  }
  if (out.empty()) throw Error("seed list is empty");
  return out;
}

// "A:B" (half-open range), "A,B,C" or a single seed.
inline std::vector<std::uint64_t> parse_seed_flag(const std::string& s) {
  std::vector<std::uint64_t> out;
  try {
    const auto colon = s.find(':');
    if (colon != std::string::npos) {
      const auto a = std::stoull(s.substr(0, colon)), b = std::stoull(s.substr(colon + 1));
      for (auto i = a; i < b; ++i) out.push_back(i);
    } else {
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
    }
  } catch (const std::logic_error&) {
    throw ParseError("--seeds", 0, "expected A:B or a comma separated list, got `" + s + "`");
  }
  if (out.empty()) throw ParseError("--seeds", 0, "seed list is empty");
  return out;
}

inline ExperimentConfig parse_config(const std::string& text, const std::string& path = "<memory>") {
  detail::Reader r(detail::parse_raw(text));
  ExperimentConfig c;
  c.path = path;
  c.text = text;

  // field-scoped conversion: library errors become parse errors on that line
  auto scoped = [&](const std::string& f, auto&& fn) {
    try {
      return fn(r.get(f));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      r.fail(f, e.what());
    }
  };
  auto element_list = [&](const std::string& f) {
    return scoped(f, [&](const json& v) {
      if (!v.is_array()) throw Error("expected a list of elements");
      std::vector<Element> out;
      for (const auto& x : v) out.push_back(element_from_json(c.group, x));
      return out;
    });
  };
  auto mode_or_list = [&](const std::string& f, std::vector<Element>* elems, std::vector<DualElement>* duals) {
    const auto& v = r.get(f);
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "auto-section") return PointMode::auto_section;
      if (s == "auto-greedy") return PointMode::auto_greedy;
      if (s == "auto-chain") return PointMode::auto_chain;
      r.fail(f, "unknown mode `" + s + "` (auto-section, auto-greedy, auto-chain or an explicit list)");
    }
    scoped(f, [&](const json& list) {
      if (!list.is_array() || list.empty()) throw Error("expected a mode string or a nonempty list");
      for (const auto& x : list) {
        if (elems) elems->push_back(element_from_json(c.group, x));
        if (duals) duals->push_back(dual_from_json(c.group, x));
      }
      return 0;
    });
    return PointMode::explicit_list;
  };

  c.group = scoped("group.factors", [](const json& v) {
    if (!v.is_array()) throw Error("expected a list such as [\"Z/4\", \"Z\"]");
    std::vector<std::string> f;
    for (const auto& x : v) {
      if (!x.is_string()) throw Error("factor must be a string such as \"Z/4\" or \"Z\"");
      f.push_back(x.get<std::string>());
    }
    return GroupSpec::parse(f);
  });

  if (r.has("subgroup.generators")) c.generators = element_list("subgroup.generators");
  if (r.has("subgroup.chain")) {
    c.chain = scoped("subgroup.chain", [&](const json& v) {
      if (!v.is_array() || v.empty()) throw Error("chain must be a nonempty list of generator lists");
      std::vector<std::vector<Element>> out;
      for (const auto& gens : v) {
        if (!gens.is_array()) throw Error("each chain member is a list of generators");
        std::vector<Element> m;
        for (const auto& x : gens) m.push_back(element_from_json(c.group, x));
        out.push_back(std::move(m));
      }
      return out;
    });
  }

  if (r.has("signal.k")) {
    const auto& v = r.get("signal.k");
    if (v.is_string()) {
      if (v.get<std::string>() != "H") r.fail("signal.k", "expected \"H\" or a list of elements");
    } else {
      c.k_is_h = false;
      c.k_set = element_list("signal.k");
      if (c.k_set.empty()) r.fail("signal.k", "K is empty");
    }
  }
  if (r.has("signal.offset")) c.signal_offset = static_cast<std::uint64_t>(r.integer("signal.offset"));

  if (r.has("window.kind")) {
    const auto k = r.string("window.kind");
    if (k == "steinhaus")
      c.window = WindowKind::steinhaus;
    else if (k == "gaussian")
      c.window = WindowKind::gaussian;
    else
      r.fail("window.kind", "unknown window `" + k + "` (steinhaus or gaussian)");
  }
  if (r.has("window.coeffs")) {
    const auto& v = r.get("window.coeffs");
    if (!(v.is_string() && v.get<std::string>() == "default")) {
      c.coeffs = scoped("window.coeffs", [](const json& list) {
        if (!list.is_array()) throw Error("expected \"default\" or a list of positive numbers");
        std::vector<double> a;
        for (const auto& x : list) {
          if (!x.is_number()) throw Error("coefficients must be numbers");
          a.push_back(x.get<double>());
        }
        return a;
      });
    }
  }
  if (r.has("window.radius")) {
    c.enumeration_radius = r.integer("window.radius");
    if (c.enumeration_radius < 1) r.fail("window.radius", "radius must be positive");
  }

  if (r.has("sampling.lambda")) c.lambda_mode = mode_or_list("sampling.lambda", &c.lambda, nullptr);
  if (r.has("sampling.lambda_count")) {
    const auto n = r.integer("sampling.lambda_count");
    if (n < 1) r.fail("sampling.lambda_count", "must be positive");
    c.lambda_count = static_cast<std::size_t>(n);
  }
  if (r.has("sampling.gamma")) c.gamma_mode = mode_or_list("sampling.gamma", nullptr, &c.gamma);
  if (c.lambda_mode == PointMode::auto_chain) r.fail("sampling.lambda", "auto-chain applies to gamma only");

  if (r.has("run.seeds")) c.seeds = scoped("run.seeds", [](const json& v) { return parse_seed_spec(v); });
  if (r.has("run.noise")) {
    c.noise = scoped("run.noise", [](const json& v) {
      std::vector<double> out;
      if (v.is_number()) out.push_back(v.get<double>());
      else if (v.is_array())
        for (const auto& x : v) {
          if (!x.is_number()) throw Error("noise levels must be numbers");
          out.push_back(x.get<double>());
        }
      else throw Error("expected a number or a list of numbers");
      for (double s : out)
        if (!(s >= 0.0) || !std::isfinite(s)) throw Error("noise levels must be finite and >= 0");
      if (out.empty()) throw Error("noise list is empty");
      return out;
    });
  }
  if (r.has("run.tolerance")) c.tolerance = r.number("run.tolerance");
  if (r.has("run.condition_cap")) c.condition_cap = r.number("run.condition_cap");

  if (r.has("verify.what")) {
    c.verify_what = r.string("verify.what");
    if (c.verify_what != "uniqueness" && c.verify_what != "completeness")
      r.fail("verify.what", "expected \"uniqueness\" or \"completeness\"");
  }
  if (r.has("verify.drop")) {
    const auto d = r.integer("verify.drop");
    if (d < 0) r.fail("verify.drop", "must be >= 0");
    c.drop_gamma = static_cast<std::size_t>(d);
  }

  if (r.has("lln.cases")) {
    const auto& v = r.get("lln.cases");
    if (!(v.is_string() && v.get<std::string>() == "all")) {
      c.lln_cases = scoped("lln.cases", [](const json& list) {
        if (!list.is_array()) throw Error("expected \"all\" or a list of [kind, mu, eta, eta0]");
        std::vector<LlnCase> out;
        for (const auto& x : list) {
          if (!x.is_array() || x.size() < 3 || !x[0].is_string()) throw Error("case must be [kind, mu, eta(, eta0)]");
          LlnCase lc{x[0].get<std::string>(), x[1].get<std::size_t>(), x[2].get<std::size_t>(), 0};
          if (lc.kind == "quartic") {
            if (x.size() != 4) throw Error("quartic case needs [\"quartic\", mu, eta, eta0]");
            lc.eta0 = x[3].get<std::size_t>();
          } else if (lc.kind != "pair") {
            throw Error("case kind must be \"quartic\" or \"pair\"");
          }
          out.push_back(lc);
        }
        return out;
      });
    }
  }
  if (r.has("lln.n")) {
    c.lln_n = scoped("lln.n", [](const json& v) {
      if (!v.is_array() || v.empty()) throw Error("expected a nonempty list of sample sizes");
      std::vector<std::size_t> out;
      for (const auto& x : v) {
        if (!x.is_number_unsigned() || x.get<std::size_t>() == 0) throw Error("sample sizes must be positive integers");
        out.push_back(x.get<std::size_t>());
      }
      return out;
    });
  }

  r.check_all_used();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("--config", 0, "cannot open `" + path + "`");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

// FNV-1a over the raw text: a stable identifier for a run's configuration.
inline std::string config_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace lcapr
