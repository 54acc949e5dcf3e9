#pragma once

// Products of cyclic groups Z/n and integer lines Z, their Pontryagin duals
// (Z/n and the torus T), and the pairing between them.

#include <lcapr/error.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

namespace lcapr {

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Factor {
  enum class Kind { cyclic, integer_line };

  Kind kind = Kind::cyclic;
  std::int64_t order = 1;  // unused for integer lines

  static Factor cyclic(std::int64_t n) {
    if (n < 1) throw Error("cyclic factor order must be >= 1, got " + std::to_string(n));
    return {Kind::cyclic, n};
  }
  static Factor integer_line() { return {Kind::integer_line, 0}; }

  bool finite() const noexcept { return kind == Kind::cyclic; }

  friend bool operator==(const Factor&, const Factor&) = default;
};

inline std::string to_string(const Factor& f) {
  return f.finite() ? "Z/" + std::to_string(f.order) : "Z";
}

// Accepts "Z" and "Z/n" (whitespace tolerated).
inline Factor parse_factor(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s == "Z") return Factor::integer_line();
  if (s.size() > 2 && s[0] == 'Z' && s[1] == '/') {
    const std::string digits = s.substr(2);
    if (std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) &&
        digits.size() < 12) {
      return Factor::cyclic(std::stoll(digits));
    }
  }
  throw Error("malformed group factor '" + std::string(text) + "' (expected \"Z\" or \"Z/n\")");
}

class GroupSpec {
 public:
  GroupSpec() = default;
  explicit GroupSpec(std::vector<Factor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw Error("group must have at least one factor");
    for (const auto& f : factors_)
      if (f.finite() && f.order < 1) throw Error("cyclic factor order must be >= 1");
  }

  static GroupSpec parse(const std::vector<std::string>& factors) {
    std::vector<Factor> fs;
    fs.reserve(factors.size());
    for (const auto& s : factors) fs.push_back(parse_factor(s));
    return GroupSpec(std::move(fs));
  }

  std::size_t arity() const noexcept { return factors_.size(); }
  const Factor& operator[](std::size_t i) const { return factors_[i]; }
  const std::vector<Factor>& factors() const noexcept { return factors_; }

  bool finite() const noexcept {
    return std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.finite(); });
  }

  // Cardinality of the product of the cyclic factors.
  std::int64_t finite_order() const noexcept {
    std::int64_t n = 1;
    for (const auto& f : factors_)
      if (f.finite()) n *= f.order;
    return n;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += " x ";
      s += lcapr::to_string(factors_[i]);
    }
    return s;
  }

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

 private:
  std::vector<Factor> factors_;
};

inline GroupSpec product_group(const GroupSpec& a, const GroupSpec& b) {
  std::vector<Factor> fs = a.factors();
  fs.insert(fs.end(), b.factors().begin(), b.factors().end());
  return GroupSpec(std::move(fs));
}

namespace detail {

// Rank of an integer in the order 0, 1, -1, 2, -2, ...; residues (>= 0) keep
// their natural order.
constexpr std::int64_t spiral_key(std::int64_t v) noexcept { return v > 0 ? 2 * v - 1 : -2 * v; }

constexpr std::int64_t mod(std::int64_t a, std::int64_t n) noexcept {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t n) {
  return static_cast<std::int64_t>(mod(static_cast<std::int64_t>((static_cast<__int128>(a) * b) % n), n));
}

}  // namespace detail

// Point of G: residue in [0, n) for Z/n, any integer for Z.
struct Element {
  std::vector<std::int64_t> c;

  Element() = default;
  Element(std::initializer_list<std::int64_t> v) : c(v) {}
  explicit Element(std::vector<std::int64_t> v) : c(std::move(v)) {}

  std::size_t size() const noexcept { return c.size(); }
  std::int64_t operator[](std::size_t i) const { return c[i]; }

  friend bool operator==(const Element&, const Element&) = default;

  // Lexicographic over coordinates, each coordinate compared by magnitude
  // (0, 1, -1, 2, -2, ...). Canonical coset representatives are minimal
  // in this order.
  friend std::strong_ordering operator<=>(const Element& a, const Element& b) {
    const std::size_t n = std::min(a.c.size(), b.c.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto ka = detail::spiral_key(a.c[i]);
      const auto kb = detail::spiral_key(b.c[i]);
      if (ka != kb) return ka <=> kb;
    }
    return a.c.size() <=> b.c.size();
  }
};

// One coordinate of a character. For a Z/n factor `den == n` and `num` is the
// residue in [0, n). For a torus factor num/den is a reduced rotation number
// in [0, 1).
struct DualCoord {
  std::int64_t num = 0;
  std::int64_t den = 1;

  friend bool operator==(const DualCoord&, const DualCoord&) = default;
  friend std::strong_ordering operator<=>(const DualCoord& a, const DualCoord& b) {
    const __int128 l = static_cast<__int128>(a.num) * b.den;
    const __int128 r = static_cast<__int128>(b.num) * a.den;
    if (l != r) return l < r ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.den <=> b.den;
  }
};

struct DualElement {
  std::vector<DualCoord> c;

  DualElement() = default;
  explicit DualElement(std::vector<DualCoord> v) : c(std::move(v)) {}

  std::size_t size() const noexcept { return c.size(); }
  const DualCoord& operator[](std::size_t i) const { return c[i]; }

  friend bool operator==(const DualElement&, const DualElement&) = default;
  friend std::strong_ordering operator<=>(const DualElement& a, const DualElement& b) {
    const std::size_t n = std::min(a.c.size(), b.c.size());
    for (std::size_t i = 0; i < n; ++i)
      if (auto o = a.c[i] <=> b.c[i]; o != 0) return o;
    return a.c.size() <=> b.c.size();
  }
};

inline DualCoord torus_coord(std::int64_t p, std::int64_t q) {
  if (q <= 0) throw Error("torus rotation denominator must be positive");
  p = detail::mod(p, q);
  const std::int64_t g = std::gcd(p, q);
  return g == 0 ? DualCoord{0, 1} : DualCoord{p / g, q / g};
}

// ---------------------------------------------------------------------------
// Construction and membership

inline void check_arity(const GroupSpec& g, std::size_t n) {
  if (n != g.arity())
    throw Error("coordinate arity " + std::to_string(n) + " does not match group arity " + std::to_string(g.arity()));
}

inline Element make_element(const GroupSpec& g, std::vector<std::int64_t> coords) {
  check_arity(g, coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (g[i].finite()) coords[i] = detail::mod(coords[i], g[i].order);
  return Element(std::move(coords));
}

inline bool contains(const GroupSpec& g, const Element& x) {
  if (x.size() != g.arity()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (g[i].finite() && (x[i] < 0 || x[i] >= g[i].order)) return false;
  return true;
}

// Cyclic coordinates are residues; torus coordinates are given as {p, q}.
inline DualElement make_dual(const GroupSpec& g, const std::vector<DualCoord>& coords) {
  check_arity(g, coords.size());
  DualElement xi;
  xi.c.reserve(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (g[i].finite()) {
      if (coords[i].den != 1 && coords[i].den != g[i].order)
        throw Error("cyclic dual coordinate must be a residue");
      xi.c.push_back({detail::mod(coords[i].num, g[i].order), g[i].order});
    } else {
      xi.c.push_back(torus_coord(coords[i].num, coords[i].den));
    }
  }
  return xi;
}

inline DualElement dual_from_residues(const GroupSpec& g, const std::vector<std::int64_t>& residues) {
  check_arity(g, residues.size());
  std::vector<DualCoord> c;
  for (auto r : residues) c.push_back({r, 1});
  return make_dual(g, c);
}

inline bool contains(const GroupSpec& g, const DualElement& xi) {
  if (xi.size() != g.arity()) return false;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const auto& d = xi[i];
    if (g[i].finite()) {
      if (d.den != g[i].order || d.num < 0 || d.num >= d.den) return false;
    } else {
      if (d.den < 1 || d.num < 0 || d.num >= d.den || std::gcd(d.num, d.den) != 1) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Arithmetic on G

inline Element zero(const GroupSpec& g) { return Element(std::vector<std::int64_t>(g.arity(), 0)); }

inline Element group_op(const GroupSpec& g, const Element& a, const Element& b) {
  check_arity(g, a.size());
  check_arity(g, b.size());
  Element r = a;
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.c[i] += b[i];
    if (g[i].finite()) r.c[i] = detail::mod(r.c[i], g[i].order);
  }
  return r;
}

inline Element negate(const GroupSpec& g, const Element& a) {
  check_arity(g, a.size());
  Element r = a;
  for (std::size_t i = 0; i < r.size(); ++i)
    r.c[i] = g[i].finite() ? detail::mod(-a[i], g[i].order) : -a[i];
  return r;
}

inline Element subtract(const GroupSpec& g, const Element& a, const Element& b) {
  return group_op(g, a, negate(g, b));
}

// ---------------------------------------------------------------------------
// Arithmetic on the dual

inline DualElement dual_zero(const GroupSpec& g) {
  DualElement z;
  for (const auto& f : g.factors()) z.c.push_back(f.finite() ? DualCoord{0, f.order} : DualCoord{0, 1});
  return z;
}

inline DualElement group_op(const GroupSpec& g, const DualElement& a, const DualElement& b) {
  check_arity(g, a.size());
  check_arity(g, b.size());
  DualElement r = a;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (g[i].finite()) {
      r.c[i].num = detail::mod(a[i].num + b[i].num, g[i].order);
    } else {
      const std::int64_t l = std::lcm(a[i].den, b[i].den);
      r.c[i] = torus_coord(a[i].num * (l / a[i].den) + b[i].num * (l / b[i].den), l);
    }
  }
  return r;
}

inline DualElement negate(const GroupSpec& g, const DualElement& a) {
  check_arity(g, a.size());
  DualElement r = a;
  for (std::size_t i = 0; i < r.size(); ++i)
    r.c[i] = g[i].finite() ? DualCoord{detail::mod(-a[i].num, g[i].order), g[i].order} : torus_coord(-a[i].num, a[i].den);
  return r;
}

inline DualElement subtract(const GroupSpec& g, const DualElement& a, const DualElement& b) {
  return group_op(g, a, negate(g, b));
}

inline DualElement zero_like(const GroupSpec& g, const DualElement&) { return dual_zero(g); }
inline Element zero_like(const GroupSpec& g, const Element&) { return zero(g); }

// ---------------------------------------------------------------------------
// Pairing <x, xi>

// Rotation number of <x, xi> in [0, 1), computed factor by factor with exact
// integer arithmetic.
inline double pairing_turns(const GroupSpec& g, const Element& x, const DualElement& xi) {
  check_arity(g, x.size());
  check_arity(g, xi.size());
  double turns = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& d = xi[i];
    turns += static_cast<double>(detail::mulmod(x[i], d.num, d.den)) / static_cast<double>(d.den);
  }
  return turns - std::floor(turns);
}

inline cplx pairing(const GroupSpec& g, const Element& x, const DualElement& xi) {
  const double t = pairing_turns(g, x, xi);
  return {std::cos(two_pi * t), std::sin(two_pi * t)};
}

// The pairing is symmetric under the identification of G with the dual of its dual.
inline cplx pairing(const GroupSpec& g, const DualElement& xi, const Element& x) { return pairing(g, x, xi); }

// <x, xi> == 1 exactly.
inline bool pairs_trivially(const GroupSpec& g, const Element& x, const DualElement& xi) {
  check_arity(g, x.size());
  check_arity(g, xi.size());
  // Sum of fractions num_i x_i / den_i must be an integer; accumulate with a
  // common denominator.
  __int128 num = 0;
  __int128 den = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& d = xi[i];
    const std::int64_t term = detail::mulmod(x[i], d.num, d.den);
    if (term == 0) continue;
    const __int128 l = std::lcm(static_cast<std::int64_t>(den), d.den);
    num = num * (l / den) + static_cast<__int128>(term) * (l / d.den);
    den = l;
    num %= den;
  }
  return num % den == 0;
}

// ---------------------------------------------------------------------------
// Enumeration and products

// All elements of the finite part of G (integer-line coordinates fixed at 0),
// in canonical order.
inline std::vector<Element> enumerate_finite(const GroupSpec& g) {
  std::vector<Element> out{zero(g)};
  for (std::size_t i = g.arity(); i-- > 0;) {
    if (!g[i].finite()) continue;
    std::vector<Element> next;
    next.reserve(out.size() * static_cast<std::size_t>(g[i].order));
    for (std::int64_t r = 0; r < g[i].order; ++r)
      for (const auto& e : out) {
        Element x = e;
        x.c[i] = r;
        next.push_back(std::move(x));
      }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// All characters of the finite part of G (torus coordinates fixed at 0).
inline std::vector<DualElement> enumerate_dual_finite(const GroupSpec& g) {
  std::vector<DualElement> out;
  for (const auto& x : enumerate_finite(g)) {
    DualElement xi = dual_zero(g);
    for (std::size_t i = 0; i < g.arity(); ++i)
      if (g[i].finite()) xi.c[i].num = x[i];
    out.push_back(std::move(xi));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Element concat(const Element& a, const Element& b) {
  Element r = a;
  r.c.insert(r.c.end(), b.c.begin(), b.c.end());
  return r;
}

inline DualElement concat(const DualElement& a, const DualElement& b) {
  DualElement r = a;
  r.c.insert(r.c.end(), b.c.begin(), b.c.end());
  return r;
}

// Elements x with the given factor coordinates only, ordered 0, 1, -1, 2, -2, ...
// for integer lines: "shell" order of the Cartesian product, by total rank.
inline std::vector<Element> spiral_enumeration(const GroupSpec& g, std::int64_t radius) {
  std::vector<std::vector<std::int64_t>> axes(g.arity());
  for (std::size_t i = 0; i < g.arity(); ++i) {
    if (g[i].finite()) {
      for (std::int64_t r = 0; r < g[i].order; ++r) axes[i].push_back(r);
    } else {
      axes[i].push_back(0);
      for (std::int64_t r = 1; r <= radius; ++r) {
        axes[i].push_back(r);
        axes[i].push_back(-r);
      }
    }
  }
  std::vector<Element> out{Element(std::vector<std::int64_t>())};
  for (const auto& axis : axes) {
    std::vector<Element> next;
    for (const auto& e : out)
      for (auto v : axis) {
        Element x = e;
        x.c.push_back(v);
        next.push_back(std::move(x));
      }
    out = std::move(next);
  }
  auto total = [](const Element& x) {
    std::int64_t s = 0;
    for (auto v : x.c) s += detail::spiral_key(v);
    return s;
  };
  std::stable_sort(out.begin(), out.end(), [&](const Element& a, const Element& b) {
    const auto ta = total(a), tb = total(b);
    return ta != tb ? ta < tb : a < b;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Text

inline std::string to_string(const Element& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(x[i]);
  }
  return s + ")";
}

inline std::string to_string(const DualCoord& d, bool cyclic) {
  if (cyclic || d.num == 0) return std::to_string(d.num);
  return std::to_string(d.num) + "/" + std::to_string(d.den);
}

inline std::string to_string(const GroupSpec& g, const DualElement& xi) {
  std::string s = "(";
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (i) s += ",";
    s += to_string(xi[i], g[i].finite());
  }
  return s + ")";
}

}  // namespace lcapr
