#pragma once

// Differential calculus on the plane: Poisson bracket, Hamiltonian vector
// fields, and sparse bi-/tri-differential operators with coefficients in a
// pluggable ring R. Spatial dependence of a coefficient lives in the key
// (the monomial x^a y^b); R itself is constant in x and y.

#include <compare>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "invstar/poly.hpp"
#include "invstar/scalar.hpp"

namespace invstar {

/// Order of a mixed partial (d/dx)^x (d/dy)^y.
struct DerivIndex {
  int x = 0;
  int y = 0;

  int order() const { return x + y; }
  bool fits_in(const DerivIndex& o) const { return x <= o.x && y <= o.y; }
  friend auto operator<=>(const DerivIndex&, const DerivIndex&) = default;
  friend bool operator==(const DerivIndex&, const DerivIndex&) = default;
  friend DerivIndex operator+(DerivIndex a, DerivIndex b) { return {a.x + b.x, a.y + b.y}; }
  friend DerivIndex operator-(DerivIndex a, DerivIndex b) { return {a.x - b.x, a.y - b.y}; }
};

inline constexpr DerivIndex kDx{1, 0};
inline constexpr DerivIndex kDy{0, 1};

template <CoefficientRing R>
SparsePoly<R> derivative(const SparsePoly<R>& p, DerivIndex d) {
  return derivative(p, d.x, d.y);
}

/// Coefficient of x^(m-d) in d applied to x^m, i.e. falling factorials.
inline std::int64_t derivative_factor(Mono m, DerivIndex d) { return falling(m.x, d.x) * falling(m.y, d.y); }

/// (d.x choose a.x)(d.y choose a.y)
inline std::int64_t binomial(DerivIndex d, DerivIndex a) { return binomial(d.x, a.x) * binomial(d.y, a.y); }

/// Every a <= d componentwise, in lexicographic order.
inline std::vector<DerivIndex> sub_indices(DerivIndex d) {
  std::vector<DerivIndex> out;
  for (int a = 0; a <= d.x; ++a)
    for (int b = 0; b <= d.y; ++b) out.push_back({a, b});
  return out;
}

struct BiKey {
  DerivIndex left;
  DerivIndex right;
  Mono mono;
  friend auto operator<=>(const BiKey&, const BiKey&) = default;
};

struct TriKey {
  DerivIndex f;
  DerivIndex g;
  DerivIndex h;
  Mono mono;
  friend auto operator<=>(const TriKey&, const TriKey&) = default;
};

inline std::string index_str(DerivIndex d) { return std::to_string(d.x) + "," + std::to_string(d.y); }

inline std::string key_str(const BiKey& k) {
  return "C[" + index_str(k.left) + ";" + index_str(k.right) + "] * x^" + std::to_string(k.mono.x) + " y^" +
         std::to_string(k.mono.y);
}

inline std::string key_str(const TriKey& k) {
  return "T[" + index_str(k.f) + ";" + index_str(k.g) + ";" + index_str(k.h) + "] * x^" + std::to_string(k.mono.x) +
         " y^" + std::to_string(k.mono.y);
}

/// Finite sparse sum of coefficient * x^a y^b * derivative slots.
template <class Key, CoefficientRing R>
class DiffOp {
 public:
  using Terms = std::map<Key, R>;

  DiffOp() = default;

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  R coefficient(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? R{} : it->second;
  }

  void add(const Key& k, const R& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(k, c);
    if (!fresh) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  DiffOp& operator+=(const DiffOp& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  DiffOp& operator-=(const DiffOp& o) {
    for (const auto& [k, c] : o.terms_) add(k, -c);
    return *this;
  }
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }

  DiffOp scaled(const Scalar& s) const {
    DiffOp out;
    for (const auto& [k, c] : terms_) out.add(k, c * s);
    return out;
  }

  friend bool operator==(const DiffOp&, const DiffOp&) = default;

  /// One "<key> = <coefficient>" line per term, in key order.
  std::string str() const {
    if (terms_.empty()) return "0\n";
    std::ostringstream os;
    for (const auto& [k, c] : terms_) os << key_str(k) << " = " << c.str() << "\n";
    return os.str();
  }

 private:
  Terms terms_;
};

template <CoefficientRing R>
using BiDiffOp = DiffOp<BiKey, R>;
template <CoefficientRing R>
using TriDiffOp = DiffOp<TriKey, R>;

/// Pointwise product f*g as a bidifferential operator.
template <CoefficientRing R>
BiDiffOp<R> identity_op() {
  BiDiffOp<R> op;
  op.add({}, R(Scalar(1)));
  return op;
}

/// Converts coefficients between rings (e.g. Scalar into UnknownExpr).
template <CoefficientRing To, class Key, CoefficientRing From>
DiffOp<Key, To> ring_cast(const DiffOp<Key, From>& op) {
  DiffOp<Key, To> out;
  for (const auto& [k, c] : op.terms()) out.add(k, To(c));
  return out;
}

// ---------------------------------------------------------------------------
// Poisson geometry of (R^2, dx^dy).

inline Poly poisson(const Poly& f, const Poly& g) {
  return partial(f, Axis::x) * partial(g, Axis::y) - partial(f, Axis::y) * partial(g, Axis::x);
}

/// coeff_x * d/dx + coeff_y * d/dy
struct VectorField {
  Poly coeff_x;
  Poly coeff_y;

  bool is_zero() const { return coeff_x.is_zero() && coeff_y.is_zero(); }
  Poly apply(const Poly& f) const { return coeff_x * partial(f, Axis::x) + coeff_y * partial(f, Axis::y); }

  friend bool operator==(const VectorField&, const VectorField&) = default;

  std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    if (!coeff_x.is_zero()) out = "(" + coeff_x.str() + ")*d_x";
    if (!coeff_y.is_zero()) out += (out.empty() ? "" : " + ") + ("(" + coeff_y.str() + ")*d_y");
    return out;
  }
};

/// [X, Y] as a vector field.
inline VectorField commutator(const VectorField& a, const VectorField& b) {
  return {a.apply(b.coeff_x) - b.apply(a.coeff_x), a.apply(b.coeff_y) - b.apply(a.coeff_y)};
}

/// X_H = {H, .} = H_x d_y - H_y d_x.
inline VectorField hamiltonian_vf(const Poly& h) { return {-partial(h, Axis::y), partial(h, Axis::x)}; }

// ---------------------------------------------------------------------------
// Evaluation on polynomials.

template <CoefficientRing R>
SparsePoly<R> apply_bidiff(const BiDiffOp<R>& op, const Poly& f, const Poly& g) {
  SparsePoly<R> out;
  for (const auto& [k, c] : op.terms()) {
    Poly prod = derivative(f, k.left) * derivative(g, k.right);
    for (const auto& [m, s] : prod.terms()) out.add(m + k.mono, c * s);
  }
  return out;
}

template <CoefficientRing R>
SparsePoly<R> apply_tri(const TriDiffOp<R>& op, const Poly& f, const Poly& g, const Poly& h) {
  SparsePoly<R> out;
  for (const auto& [k, c] : op.terms()) {
    Poly prod = derivative(f, k.f) * derivative(g, k.g) * derivative(h, k.h);
    for (const auto& [m, s] : prod.terms()) out.add(m + k.mono, c * s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lie derivative  L_X B = X o B - B(X., .) - B(., X.).
//
// For a term c x^m d^a (x) d^b, the first-order parts of B(Xf, g) cancel
// against X o B, leaving the derivative of the coefficient monomial and the
// Leibniz terms in which at least one derivative hits a coefficient of X.

namespace detail {

template <CoefficientRing R>
void leibniz_slot(BiDiffOp<R>& out, const VectorField& field, const BiKey& key, const R& c, bool left_slot) {
  DerivIndex slot = left_slot ? key.left : key.right;
  for (DerivIndex gamma : sub_indices(slot)) {
    if (gamma == DerivIndex{}) continue;
    std::int64_t w = binomial(slot, gamma);
    for (auto [coeff, unit] : {std::pair{&field.coeff_x, kDx}, std::pair{&field.coeff_y, kDy}}) {
      Poly dc = derivative(*coeff, gamma);
      DerivIndex moved = slot - gamma + unit;
      for (const auto& [n, s] : dc.terms()) {
        BiKey k = key;
        (left_slot ? k.left : k.right) = moved;
        k.mono = key.mono + n;
        out.add(k, c * (s * Scalar(-w)));
      }
    }
  }
}

}  // namespace detail

template <CoefficientRing R>
BiDiffOp<R> lie_derivative(const VectorField& field, const BiDiffOp<R>& op) {
  BiDiffOp<R> out;
  if (field.is_zero()) return out;
  for (const auto& [key, c] : op.terms()) {
    Poly dm = field.apply(Poly::monomial(key.mono));
    for (const auto& [n, s] : dm.terms()) out.add({key.left, key.right, n}, c * s);
    detail::leibniz_slot(out, field, key, c, true);
    detail::leibniz_slot(out, field, key, c, false);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Composition into tridifferential operators.
//
// d^a applied to n(x) * d^p u * d^q v splits as a = a1 + a2 + a3 with weight
// a!/(a1! a2! a3!) and d^a1 hitting the coefficient monomial n.

namespace detail {

inline std::int64_t multinomial(int n, int a, int b) {
  return binomial(n, a) * binomial(n - a, b);
}

/// Calls fn(a1, a2, a3, weight) for every split with a nonzero weight.
template <class Fn>
void for_each_split(DerivIndex total, Mono coeff_mono, Fn&& fn) {
  for (DerivIndex a1 : sub_indices(total)) {
    std::int64_t coeff_factor = derivative_factor(coeff_mono, a1);
    if (coeff_factor == 0) continue;
    DerivIndex rest = total - a1;
    for (DerivIndex a2 : sub_indices(rest)) {
      DerivIndex a3 = rest - a2;
      std::int64_t w = multinomial(total.x, a1.x, a2.x) * multinomial(total.y, a1.y, a2.y) * coeff_factor;
      fn(a1, a2, a3, w);
    }
  }
}

inline Mono lower(Mono m, DerivIndex d) { return {m.x - d.x, m.y - d.y}; }

}  // namespace detail

/// T(f, g, h) = outer(inner(f, g), h).
template <CoefficientRing R>
TriDiffOp<R> compose_left(const BiDiffOp<R>& outer, const BiDiffOp<R>& inner) {
  TriDiffOp<R> out;
  for (const auto& [outer_key, co] : outer.terms()) {
    for (const auto& [inner_key, ci] : inner.terms()) {
      R prod = co * ci;
      if (prod.is_zero()) continue;
      const BiKey& ko = outer_key;
      const BiKey& ki = inner_key;
      detail::for_each_split(ko.left, ki.mono, [&](DerivIndex a1, DerivIndex a2, DerivIndex a3, std::int64_t w) {
        out.add({ki.left + a2, ki.right + a3, ko.right, ko.mono + detail::lower(ki.mono, a1)}, prod * Scalar(w));
      });
    }
  }
  return out;
}

/// T(f, g, h) = outer(f, inner(g, h)).
template <CoefficientRing R>
TriDiffOp<R> compose_right(const BiDiffOp<R>& outer, const BiDiffOp<R>& inner) {
  TriDiffOp<R> out;
  for (const auto& [outer_key, co] : outer.terms()) {
    for (const auto& [inner_key, ci] : inner.terms()) {
      R prod = co * ci;
      if (prod.is_zero()) continue;
      const BiKey& ko = outer_key;
      const BiKey& ki = inner_key;
      detail::for_each_split(ko.right, ki.mono, [&](DerivIndex a1, DerivIndex a2, DerivIndex a3, std::int64_t w) {
        out.add({ko.left, ki.left + a2, ki.right + a3, ko.mono + detail::lower(ki.mono, a1)}, prod * Scalar(w));
      });
    }
  }
  return out;
}

enum class Side { left, right };

/// left: B(f g, h); right: B(f, g h).
template <CoefficientRing R>
TriDiffOp<R> lift_product(const BiDiffOp<R>& op, Side side) {
  TriDiffOp<R> out;
  for (const auto& [k, c] : op.terms()) {
    DerivIndex split = side == Side::left ? k.left : k.right;
    for (DerivIndex a : sub_indices(split)) {
      R w = c * Scalar(binomial(split, a));
      if (side == Side::left)
        out.add({a, split - a, k.right, k.mono}, w);
      else
        out.add({k.left, a, split - a, k.mono}, w);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

/// r-th Moyal term: (-i/2)^r / r! * sum_k C(r,k) (-1)^k d_x^(r-k) d_y^k (x) d_x^k d_y^(r-k).
inline BiDiffOp<Scalar> moyal_term(int r) {
  Scalar prefactor(1);
  for (int t = 1; t <= r; ++t) prefactor *= Scalar(Rational(0), Rational(-1, 2)) * Scalar::ratio(1, t);
  BiDiffOp<Scalar> op;
  for (int k = 0; k <= r; ++k) {
    Scalar c = prefactor * Scalar(binomial(r, k) * (k % 2 == 0 ? 1 : -1));
    op.add({{r - k, k}, {k, r - k}, {}}, c);
  }
  return op;
}

}  // namespace invstar
