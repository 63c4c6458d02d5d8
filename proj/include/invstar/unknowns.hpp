#pragma once

// Symbolic operator coefficients: unknowns C^r_{ij;kl} x^a y^b and
// polynomials in them over Q(i).

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "invstar/operators.hpp"
#include "invstar/parse.hpp"
#include "invstar/scalar.hpp"

namespace invstar {

/// Coefficient of x^mono in the (left, right) entry of C^level.
/// Ordered lexicographically by (level, left, right, mono).
struct Unknown {
  int level = 1;
  DerivIndex left;
  DerivIndex right;
  Mono mono;

  friend auto operator<=>(const Unknown&, const Unknown&) = default;
  friend bool operator==(const Unknown&, const Unknown&) = default;

  BiKey key() const { return {left, right, mono}; }

  /// "C1[0,1;1,0]" for constant coefficients, "C1[0,1;1,0@2,0]" otherwise.
  std::string name() const {
    std::string out = "C" + std::to_string(level) + "[" + index_str(left) + ";" + index_str(right);
    if (mono != Mono{}) out += "@" + std::to_string(mono.x) + "," + std::to_string(mono.y);
    return out + "]";
  }
};

/// Polynomial in Unknowns with Scalar coefficients, canonical and zero-pruned.
/// Terms are ordered by degree, then by their largest unknowns, descending.
class UnknownExpr {
 public:
  using Monomial = std::vector<Unknown>;  // sorted descending

  struct TermOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
      if (a.size() != b.size()) return a.size() > b.size();
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), std::greater<>{});
    }
  };
  using Terms = std::map<Monomial, Scalar, TermOrder>;

  UnknownExpr() = default;
  UnknownExpr(const Scalar& c) { add({}, c); }  // NOLINT(google-explicit-constructor)
  UnknownExpr(long c) : UnknownExpr(Scalar(c)) {}  // NOLINT(google-explicit-constructor)

  static UnknownExpr variable(const Unknown& u) {
    UnknownExpr e;
    e.terms_.emplace(Monomial{u}, Scalar(1));
    return e;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const { return terms_.empty() ? -1 : static_cast<int>(terms_.begin()->first.size()); }
  bool is_constant() const { return degree() <= 0; }
  bool is_linear() const { return degree() <= 1; }

  Scalar coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
  }
  Scalar constant_term() const { return coefficient({}); }

  std::set<Unknown> unknowns() const {
    std::set<Unknown> out;
    for (const auto& [m, c] : terms_) out.insert(m.begin(), m.end());
    return out;
  }

  void add(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  UnknownExpr& operator+=(const UnknownExpr& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  UnknownExpr& operator-=(const UnknownExpr& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  friend UnknownExpr operator+(UnknownExpr a, const UnknownExpr& b) { return a += b; }
  friend UnknownExpr operator-(UnknownExpr a, const UnknownExpr& b) { return a -= b; }
  friend UnknownExpr operator-(const UnknownExpr& a) { return a * Scalar(-1); }

  friend UnknownExpr operator*(const UnknownExpr& a, const Scalar& s) {
    UnknownExpr out;
    if (s.is_zero()) return out;
    for (const auto& [m, c] : a.terms_) out.terms_.emplace(m, c * s);
    return out;
  }

  friend UnknownExpr operator*(const UnknownExpr& a, const UnknownExpr& b) {
    UnknownExpr out;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m;
        m.reserve(ma.size() + mb.size());
        std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m), std::greater<>{});
        out.add(m, ca * cb);
      }
    }
    return out;
  }

  friend bool operator==(const UnknownExpr&, const UnknownExpr&) = default;

  /// Replaces each unknown u in the map by its image, one pass.
  UnknownExpr substituted(const std::map<Unknown, UnknownExpr>& images) const {
    UnknownExpr out;
    for (const auto& [m, c] : terms_) {
      bool touched = std::any_of(m.begin(), m.end(), [&](const Unknown& u) { return images.count(u) != 0; });
      if (!touched) {
        out.add(m, c);
        continue;
      }
      UnknownExpr prod(c);
      for (const Unknown& u : m) {
        auto it = images.find(u);
        prod = prod * (it == images.end() ? variable(u) : it->second);
        if (prod.is_zero()) break;
      }
      out += prod;
    }
    return out;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) out = detail::join_terms(out, term_str(m, c));
    return out;
  }

 private:
  static std::string term_str(const Monomial& m, const Scalar& c) {
    if (m.empty()) return detail::needs_parens(c) ? "(" + c.str() + ")" : c.str();
    std::string factors;
    for (std::size_t k = 0; k < m.size();) {
      std::size_t run = 1;
      while (k + run < m.size() && m[k + run] == m[k]) ++run;
      if (!factors.empty()) factors += "*";
      factors += m[k].name();
      if (run > 1) factors += "^" + std::to_string(run);
      k += run;
    }
    return detail::coefficient_prefix(c) + factors;
  }

  Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const UnknownExpr& e) { return os << e.str(); }

inline Unknown parse_unknown_name(Cursor& cur) {
  cur.expect('C');
  Unknown u;
  u.level = cur.small_uint();
  cur.expect('[');
  u.left.x = cur.small_uint();
  cur.expect(',');
  u.left.y = cur.small_uint();
  cur.expect(';');
  u.right.x = cur.small_uint();
  cur.expect(',');
  u.right.y = cur.small_uint();
  if (cur.accept('@')) {
    u.mono.x = cur.small_uint();
    cur.expect(',');
    u.mono.y = cur.small_uint();
  }
  cur.expect(']');
  return u;
}

inline Unknown parse_unknown(std::string_view text) {
  Cursor cur(text);
  Unknown u = parse_unknown_name(cur);
  if (!cur.at_end()) cur.fail("trailing characters");
  return u;
}

inline UnknownExpr parse_unknown_expr(std::string_view text) {
  auto atom = [](Cursor& cur) -> std::optional<UnknownExpr> {
    if (cur.peek() != 'C') return std::nullopt;
    return UnknownExpr::variable(parse_unknown_name(cur));
  };
  return read_expression<UnknownExpr>(text, atom);
}

}  // namespace invstar
