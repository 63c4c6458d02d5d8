#pragma once

// Sparse polynomials in the plane coordinates x, y.

#include <compare>
#include <concepts>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "invstar/scalar.hpp"

namespace invstar {

/// Exponent pair of the monomial x^x y^y.
struct Mono {
  int x = 0;
  int y = 0;

  int degree() const { return x + y; }
  friend auto operator<=>(const Mono&, const Mono&) = default;
  friend Mono operator+(Mono a, Mono b) { return {a.x + b.x, a.y + b.y}; }
};

enum class Axis { x, y };

/// Total degree descending, then x-exponent descending.
struct GradedLex {
  bool operator()(const Mono& a, const Mono& b) const {
    if (a.degree() != b.degree()) return a.degree() > b.degree();
    return a.x > b.x;
  }
};

inline std::string mono_str(Mono m) {
  std::string out;
  auto factor = [&out](char v, int e) {
    if (e == 0) return;
    if (!out.empty()) out += "*";
    out += v;
    if (e > 1) out += "^" + std::to_string(e);
  };
  factor('x', m.x);
  factor('y', m.y);
  return out;
}

/// n(n-1)...(n-k+1); zero when k > n.
inline std::int64_t falling(int n, int k) {
  if (k > n) return 0;
  std::int64_t r = 1;
  for (int t = 0; t < k; ++t) r *= n - t;
  return r;
}

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  return falling(n, k) / falling(k, k);
}

/// Minimal requirements on an operator coefficient ring.
template <class R>
concept CoefficientRing = std::regular<R> && requires(const R& a, const R& b, const Scalar& s) {
  { a + b } -> std::convertible_to<R>;
  { a - b } -> std::convertible_to<R>;
  { a * b } -> std::convertible_to<R>;
  { a * s } -> std::convertible_to<R>;
  { -a } -> std::convertible_to<R>;
  { a.is_zero() } -> std::same_as<bool>;
  { a.str() } -> std::convertible_to<std::string>;
};

/// Polynomial in x, y with coefficients in R. Zero coefficients are never stored.
template <CoefficientRing R>
class SparsePoly {
 public:
  using Terms = std::map<Mono, R, GradedLex>;

  SparsePoly() = default;
  SparsePoly(R c) { add(Mono{}, std::move(c)); }  // NOLINT(google-explicit-constructor)
  SparsePoly(long c) requires std::same_as<R, Scalar> { add(Mono{}, Scalar(c)); }

  static SparsePoly monomial(Mono m, R c = R(Scalar(1))) {
    SparsePoly p;
    p.add(m, std::move(c));
    return p;
  }
  static SparsePoly x() { return monomial({1, 0}); }
  static SparsePoly y() { return monomial({0, 1}); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

  R coefficient(Mono m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? R{} : it->second;
  }

  void add(Mono m, const R& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  SparsePoly& operator+=(const SparsePoly& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  SparsePoly& operator-=(const SparsePoly& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
  friend SparsePoly operator-(const SparsePoly& a) { return a.scaled(Scalar(-1)); }

  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    SparsePoly out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add(ma + mb, ca * cb);
    return out;
  }

  SparsePoly scaled(const Scalar& s) const {
    SparsePoly out;
    if (s.is_zero()) return out;
    for (const auto& [m, c] : terms_) out.add(m, c * s);
    return out;
  }
  friend SparsePoly operator*(const SparsePoly& a, const Scalar& s) { return a.scaled(s); }

  /// Multiplies every coefficient by the ring element r.
  SparsePoly times(const R& r) const {
    SparsePoly out;
    for (const auto& [m, c] : terms_) out.add(m, c * r);
    return out;
  }

  SparsePoly shifted(Mono by) const {
    SparsePoly out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m + by, c);
    return out;
  }

  friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

  std::string str() const;

 private:
  Terms terms_;
};

using Poly = SparsePoly<Scalar>;

/// Partial derivative of order (dx, dy).
template <CoefficientRing R>
SparsePoly<R> derivative(const SparsePoly<R>& p, int dx, int dy) {
  SparsePoly<R> out;
  for (const auto& [m, c] : p.terms()) {
    std::int64_t f = falling(m.x, dx) * falling(m.y, dy);
    if (f == 0) continue;
    out.add({m.x - dx, m.y - dy}, c * Scalar(f));
  }
  return out;
}

template <CoefficientRing R>
SparsePoly<R> partial(const SparsePoly<R>& p, Axis axis) {
  return axis == Axis::x ? derivative(p, 1, 0) : derivative(p, 0, 1);
}

namespace detail {

inline bool needs_parens(const Scalar& c) { return !c.is_real() && !c.is_imaginary(); }

// Coefficient text for a term with a nonconstant factor string.
inline std::string coefficient_prefix(const Scalar& c) {
  if (c.is_one()) return "";
  if (c == Scalar(-1)) return "-";
  if (needs_parens(c)) return "(" + c.str() + ")*";
  return c.str() + "*";
}

template <class C>
std::string generic_coefficient_prefix(const C& c) {
  return "(" + c.str() + ")*";
}

inline std::string join_terms(const std::string& acc, const std::string& term) {
  if (acc.empty()) return term;
  if (term.front() == '-') return acc + " - " + term.substr(1);
  return acc + " + " + term;
}

}  // namespace detail

template <CoefficientRing R>
std::string SparsePoly<R>::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    std::string ms = mono_str(m);
    std::string term;
    if constexpr (std::same_as<R, Scalar>) {
      if (ms.empty())
        term = detail::needs_parens(c) ? "(" + c.str() + ")" : c.str();
      else
        term = detail::coefficient_prefix(c) + ms;
    } else {
      term = ms.empty() ? "(" + c.str() + ")" : detail::generic_coefficient_prefix(c) + ms;
    }
    out = detail::join_terms(out, term);
  }
  return out;
}

template <CoefficientRing R>
std::ostream& operator<<(std::ostream& os, const SparsePoly<R>& p) {
  return os << p.str();
}

}  // namespace invstar
