#pragma once

// Associativity of a truncated star product  f * g = sum_r hbar^r C^r(f, g),
// order by order in hbar.

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "invstar/operators.hpp"

namespace invstar {

/// C^0 = pointwise product, followed by C^1 .. C^R.
template <CoefficientRing R>
class FormalStarProduct {
 public:
  FormalStarProduct() : terms_{identity_op<R>()} {}
  explicit FormalStarProduct(std::vector<BiDiffOp<R>> higher) : FormalStarProduct() {
    for (auto& op : higher) terms_.push_back(std::move(op));
  }

  int truncation_order() const { return static_cast<int>(terms_.size()) - 1; }

  /// C^r, or the zero operator beyond the truncation.
  BiDiffOp<R> term(int r) const {
    if (r < 0) throw std::out_of_range("negative star product order");
    return r < static_cast<int>(terms_.size()) ? terms_[r] : BiDiffOp<R>{};
  }

  const std::vector<BiDiffOp<R>>& terms() const { return terms_; }

 private:
  std::vector<BiDiffOp<R>> terms_;
};

inline FormalStarProduct<Scalar> moyal_product(int order) {
  std::vector<BiDiffOp<Scalar>> terms;
  for (int r = 1; r <= order; ++r) terms.push_back(moyal_term(r));
  return FormalStarProduct<Scalar>(std::move(terms));
}

/// Order-n coefficient of (f*g)*h - f*(g*h):
///   sum_{r+s=n} C^r(C^s(f, g), h) - C^r(f, C^s(g, h)).
template <CoefficientRing R>
TriDiffOp<R> assoc_residual(const FormalStarProduct<R>& star, int n) {
  if (n < 1) throw std::invalid_argument("associativity order must be positive");
  TriDiffOp<R> out;
  for (int r = 0; r <= n; ++r) {
    BiDiffOp<R> outer = star.term(r);
    BiDiffOp<R> inner = star.term(n - r);
    if (outer.is_zero() || inner.is_zero()) continue;
    out += compose_left(outer, inner);
    out -= compose_right(outer, inner);
  }
  return out;
}

/// One coefficient of a tridifferential operator, e.g. f_yy g_x h_x.
struct ResidualTarget {
  DerivIndex f;
  DerivIndex g;
  DerivIndex h;
  Mono mono;

  TriKey key() const { return {f, g, h, mono}; }
  friend bool operator==(const ResidualTarget&, const ResidualTarget&) = default;
};

template <CoefficientRing R>
R extract(const TriDiffOp<R>& op, const ResidualTarget& t) {
  return op.coefficient(t.key());
}

namespace detail {

// Coefficient at `t` of outer(inner(f, g), h), visiting only contributing pairs.
template <CoefficientRing R>
R compose_left_at(const BiDiffOp<R>& outer, const BiDiffOp<R>& inner, const ResidualTarget& t) {
  R acc{};
  for (const auto& [ko, co] : outer.terms()) {
    if (ko.right != t.h) continue;
    for (const auto& [ki, ci] : inner.terms()) {
      if (!ki.left.fits_in(t.f) || !ki.right.fits_in(t.g)) continue;
      DerivIndex a2 = t.f - ki.left, a3 = t.g - ki.right;
      DerivIndex a1 = ko.left - a2 - a3;
      if (a1.x < 0 || a1.y < 0) continue;
      if (ko.mono + lower(ki.mono, a1) != t.mono) continue;
      std::int64_t w = derivative_factor(ki.mono, a1) * multinomial(ko.left.x, a1.x, a2.x) *
                       multinomial(ko.left.y, a1.y, a2.y);
      if (w != 0) acc = acc + (co * ci) * Scalar(w);
    }
  }
  return acc;
}

template <CoefficientRing R>
R compose_right_at(const BiDiffOp<R>& outer, const BiDiffOp<R>& inner, const ResidualTarget& t) {
  R acc{};
  for (const auto& [ko, co] : outer.terms()) {
    if (ko.left != t.f) continue;
    for (const auto& [ki, ci] : inner.terms()) {
      if (!ki.left.fits_in(t.g) || !ki.right.fits_in(t.h)) continue;
      DerivIndex a2 = t.g - ki.left, a3 = t.h - ki.right;
      DerivIndex a1 = ko.right - a2 - a3;
      if (a1.x < 0 || a1.y < 0) continue;
      if (ko.mono + lower(ki.mono, a1) != t.mono) continue;
      std::int64_t w = derivative_factor(ki.mono, a1) * multinomial(ko.right.x, a1.x, a2.x) *
                       multinomial(ko.right.y, a1.y, a2.y);
      if (w != 0) acc = acc + (co * ci) * Scalar(w);
    }
  }
  return acc;
}

}  // namespace detail

/// extract(assoc_residual(star, n), t) without building the whole residual.
template <CoefficientRing R>
R residual_coefficient(const FormalStarProduct<R>& star, int n, const ResidualTarget& t) {
  if (n < 1) throw std::invalid_argument("associativity order must be positive");
  R acc{};
  for (int r = 0; r <= n; ++r) {
    BiDiffOp<R> outer = star.term(r);
    BiDiffOp<R> inner = star.term(n - r);
    acc = acc + detail::compose_left_at(outer, inner, t);
    acc = acc - detail::compose_right_at(outer, inner, t);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Direct evaluation on monomials.

/// Coefficients of hbar^0 .. hbar^order of f * g.
inline std::vector<Poly> star_series(const FormalStarProduct<Scalar>& star, const Poly& f, const Poly& g, int order) {
  std::vector<Poly> out;
  for (int r = 0; r <= order; ++r) out.push_back(apply_bidiff(star.term(r), f, g));
  return out;
}

/// Order-n coefficient of (f*g)*h - f*(g*h), computed by nested evaluation.
inline Poly assoc_defect(const FormalStarProduct<Scalar>& star, const Poly& f, const Poly& g, const Poly& h, int n) {
  std::vector<Poly> fg = star_series(star, f, g, n);
  std::vector<Poly> gh = star_series(star, g, h, n);
  Poly out;
  for (int r = 0; r <= n; ++r) {
    out += apply_bidiff(star.term(r), fg[n - r], h);
    out -= apply_bidiff(star.term(r), f, gh[n - r]);
  }
  return out;
}

struct AssocFailure {
  int order;
  Mono f, g, h;
  Poly residual;

  std::string str() const {
    auto m = [](Mono x) { return Poly::monomial(x).str(); };
    return "order=" + std::to_string(order) + " f=" + m(f) + " g=" + m(g) + " h=" + m(h) +
           " residual=" + residual.str();
  }
};

struct AssocReport {
  int max_order = 0;
  int max_degree = 0;
  std::size_t triples = 0;
  std::vector<AssocFailure> failures;

  std::string str() const {
    std::ostringstream os;
    for (const auto& f : failures) os << f.str() << "\n";
    return os.str();
  }
};

inline std::vector<Mono> monomials_up_to(int max_degree) {
  std::vector<Mono> out;
  for (int n = 0; n <= max_degree; ++n)
    for (int a = n; a >= 0; --a) out.push_back({a, n - a});
  return out;
}

/// (f*g)*h == f*(g*h) mod hbar^(max_order+1) for every triple of monomials of
/// degree <= max_degree.
inline AssocReport assoc_check_numeric(const FormalStarProduct<Scalar>& star, int max_order, int max_degree) {
  AssocReport report{max_order, max_degree, 0, {}};
  std::vector<Mono> monos = monomials_up_to(max_degree);
  for (Mono mf : monos) {
    Poly f = Poly::monomial(mf);
    for (Mono mg : monos) {
      Poly g = Poly::monomial(mg);
      std::vector<Poly> fg = star_series(star, f, g, max_order);
      for (Mono mh : monos) {
        Poly h = Poly::monomial(mh);
        std::vector<Poly> gh = star_series(star, g, h, max_order);
        ++report.triples;
        for (int n = 1; n <= max_order; ++n) {
          Poly defect;
          for (int r = 0; r <= n; ++r) {
            if (r > star.truncation_order()) continue;
            const BiDiffOp<Scalar>& c = star.terms()[r];
            defect += apply_bidiff(c, fg[n - r], h);
            defect -= apply_bidiff(c, f, gh[n - r]);
          }
          if (!defect.is_zero()) report.failures.push_back({n, mf, mg, mh, defect});
        }
      }
    }
  }
  return report;
}

}  // namespace invstar
