#pragma once

// Invariance constraints on symbolic bidifferential operators and their exact
// elimination over Q(i).

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "invstar/operators.hpp"
#include "invstar/unknowns.hpp"

namespace invstar {

/// Where a constraint row came from: a generator (or oracle rule), the level
/// of the operator, and the coefficient key it was read off.
struct Provenance {
  std::string source;
  int level = 1;
  BiKey key;

  std::string str() const { return "source=" + source + " level=" + std::to_string(level) + " key=" + key_str(key); }
};

/// Stable identifier derived from the provenance, independent of row order.
inline std::string row_id(const Provenance& p) {
  return p.source + "/L" + std::to_string(p.level) + "/" + index_str(p.key.left) + ";" + index_str(p.key.right) +
         "@" + std::to_string(p.key.mono.x) + "," + std::to_string(p.key.mono.y);
}

/// expr = 0
struct ConstraintRow {
  std::string id;
  Provenance provenance;
  UnknownExpr expr;
};

struct ConstraintSystem {
  std::vector<ConstraintRow> rows;

  void append(const ConstraintSystem& o) { rows.insert(rows.end(), o.rows.begin(), o.rows.end()); }
  std::size_t size() const { return rows.size(); }

  /// "<row-id> | <provenance> | <expr> = 0" per line.
  std::string str() const {
    std::ostringstream os;
    for (const auto& r : rows) os << r.id << " | " << r.provenance.str() << " | " << r.expr.str() << " = 0\n";
    return os.str();
  }
};

/// Candidate C^level with one unknown per (left, right, mono) such that both
/// slots have order <= slot_bound and the coefficient degree is <= coeff_degree.
inline BiDiffOp<UnknownExpr> build_ansatz(int level, int slot_bound, int coeff_degree) {
  if (level < 1) throw std::invalid_argument("ansatz level must be positive");
  if (slot_bound < 0 || coeff_degree < 0) throw std::invalid_argument("ansatz bounds must be nonnegative");
  std::vector<DerivIndex> slots;
  for (int n = 0; n <= slot_bound; ++n)
    for (int a = n; a >= 0; --a) slots.push_back({a, n - a});
  std::vector<Mono> monos;
  for (int n = 0; n <= coeff_degree; ++n)
    for (int a = n; a >= 0; --a) monos.push_back({a, n - a});

  BiDiffOp<UnknownExpr> op;
  for (DerivIndex l : slots)
    for (DerivIndex r : slots)
      for (Mono m : monos) op.add({l, r, m}, UnknownExpr::variable({level, l, r, m}));
  return op;
}

inline std::set<Unknown> unknowns_of(const BiDiffOp<UnknownExpr>& op) {
  std::set<Unknown> out;
  for (const auto& [k, c] : op.terms()) {
    auto us = c.unknowns();
    out.insert(us.begin(), us.end());
  }
  return out;
}

/// One row per nonzero coefficient of L_X B; `label` names the generator.
inline ConstraintSystem invariance_rows(const VectorField& field, const BiDiffOp<UnknownExpr>& op,
                                        const std::string& label) {
  ConstraintSystem sys;
  BiDiffOp<UnknownExpr> lie = lie_derivative(field, op);
  for (const auto& [key, expr] : lie.terms()) {
    Provenance p{label, expr.terms().begin()->first.empty() ? 0 : expr.terms().begin()->first.front().level, key};
    sys.rows.push_back({row_id(p), p, expr});
  }
  return sys;
}

// ---------------------------------------------------------------------------
// Elimination.

/// Unknown -> linear expression in strictly smaller unknowns.
using Substitution = std::map<Unknown, UnknownExpr>;

/// Multipliers over input row indices.
using Combination = std::map<std::size_t, Scalar>;

struct EliminationResult {
  /// Fully reduced: images mention free (non-pivot) unknowns only.
  Substitution substitution;
  /// sum_k derivations[u][k] * rows[k].expr == u - substitution[u]
  std::map<Unknown, Combination> derivations;
  /// Rows that reduced to a nonzero constant; each expr is that constant.
  ConstraintSystem residual;
  std::vector<Combination> residual_derivations;

  bool consistent() const { return residual.rows.empty(); }
};

namespace detail {

struct SparseRow {
  std::map<int, Scalar> terms;
  Scalar constant;
  Combination combo;
};

class Eliminator {
 public:
  explicit Eliminator(const ConstraintSystem& sys) : sys_(sys) {
    std::set<Unknown> all;
    for (const auto& row : sys.rows) {
      if (!row.expr.is_linear()) throw std::invalid_argument("eliminate: nonlinear row " + row.id);
      auto us = row.expr.unknowns();
      all.insert(us.begin(), us.end());
    }
    order_.assign(all.begin(), all.end());
    for (std::size_t k = 0; k < order_.size(); ++k) index_.emplace(order_[k], static_cast<int>(k));
  }

  EliminationResult run() {
    EliminationResult out;
    for (std::size_t k = 0; k < sys_.rows.size(); ++k) {
      SparseRow r = load(k);
      reduce(r);
      if (r.terms.empty()) {
        if (!r.constant.is_zero()) {
          const auto& src = sys_.rows[k];
          out.residual.rows.push_back({src.id, src.provenance, UnknownExpr(r.constant)});
          out.residual_derivations.push_back(r.combo);
        }
        continue;
      }
      install(std::move(r));
    }
    for (const auto& [p, row] : pivots_) {
      UnknownExpr image(-row.constant);
      for (const auto& [u, a] : row.terms) image += UnknownExpr::variable(order_[u]) * (-a);
      out.substitution.emplace(order_[p], image);
      out.derivations.emplace(order_[p], row.combo);
    }
    return out;
  }

 private:
  SparseRow load(std::size_t k) const {
    SparseRow r;
    for (const auto& [m, c] : sys_.rows[k].expr.terms()) {
      if (m.empty())
        r.constant = c;
      else
        r.terms.emplace(index_.at(m.front()), c);
    }
    r.combo.emplace(k, Scalar(1));
    return r;
  }

  // target += a * src; `owner` >= 0 keeps the occurrence index current.
  void axpy(SparseRow& target, const SparseRow& src, const Scalar& a, int owner) {
    for (const auto& [u, c] : src.terms) {
      auto [it, fresh] = target.terms.try_emplace(u, a * c);
      if (!fresh) {
        it->second += a * c;
        if (it->second.is_zero()) {
          target.terms.erase(it);
          if (owner >= 0) occ_[u].erase(owner);
        }
      } else if (owner >= 0) {
        occ_[u].insert(owner);
      }
    }
    target.constant += a * src.constant;
    for (const auto& [k, c] : src.combo) {
      auto [it, fresh] = target.combo.try_emplace(k, a * c);
      if (!fresh) {
        it->second += a * c;
        if (it->second.is_zero()) target.combo.erase(it);
      }
    }
  }

  void reduce(SparseRow& r) {
    std::vector<std::pair<int, Scalar>> hits;
    for (const auto& [u, a] : r.terms)
      if (pivots_.count(u)) hits.emplace_back(u, a);
    for (const auto& [u, a] : hits) {
      r.terms.erase(u);
      axpy(r, pivots_.at(u), -a, -1);
    }
  }

  void install(SparseRow r) {
    int p = r.terms.rbegin()->first;
    Scalar inv = r.terms.rbegin()->second.inverse();
    r.terms.erase(p);
    for (auto& [u, c] : r.terms) c *= inv;
    r.constant *= inv;
    for (auto& [k, c] : r.combo) c *= inv;

    auto found = occ_.find(p);
    if (found != occ_.end()) {
      std::set<int> owners = std::move(found->second);
      occ_.erase(found);
      for (int q : owners) {
        SparseRow& target = pivots_.at(q);
        Scalar a = target.terms.at(p);
        target.terms.erase(p);
        axpy(target, r, -a, q);
      }
    }
    for (const auto& [u, c] : r.terms) occ_[u].insert(p);
    pivots_.emplace(p, std::move(r));
  }

  const ConstraintSystem& sys_;
  std::vector<Unknown> order_;
  std::map<Unknown, int> index_;
  std::map<int, SparseRow> pivots_;
  std::map<int, std::set<int>> occ_;
};

}  // namespace detail

/// Gauss-Jordan elimination of linear rows, pivoting on the largest unknown of
/// each row. Deterministic for identical input.
inline EliminationResult eliminate(const ConstraintSystem& sys) { return detail::Eliminator(sys).run(); }

/// Applies s until no substituted unknown remains.
inline UnknownExpr substitute(const UnknownExpr& e, const Substitution& s) {
  UnknownExpr cur = e;
  for (std::size_t pass = 0; pass <= s.size(); ++pass) {
    bool pending = false;
    for (const Unknown& u : cur.unknowns())
      if (s.count(u)) {
        pending = true;
        break;
      }
    if (!pending) return cur;
    cur = cur.substituted(s);
  }
  throw std::logic_error("substitute: substitution is not triangular");
}

/// Entries of s whose image is zero.
inline Substitution vanishing_part(const Substitution& s) {
  Substitution out;
  for (const auto& [u, e] : s)
    if (e.is_zero()) out.emplace(u, e);
  return out;
}

inline std::vector<Unknown> free_unknowns(const std::set<Unknown>& universe, const Substitution& s) {
  std::vector<Unknown> out;
  for (const Unknown& u : universe)
    if (!s.count(u)) out.push_back(u);
  return out;
}

/// Σ multipliers * rows, for checking derivations.
inline UnknownExpr combine(const ConstraintSystem& sys, const Combination& combo) {
  UnknownExpr out;
  for (const auto& [k, c] : combo) out += sys.rows.at(k).expr * c;
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form relations for invariance under the Hamiltonian fields of
// x^3, x^2, x, y, 1, generated without the Lie-derivative engine.
//
//  item 1: every non-constant coefficient vanishes.
//  item 2: C_{ij;kl} = 0 if i > l or j < k.
//  item 3: C_{ij;kl} tied to C_{i+1,j-1;k-1,l+1} and C_{i-1,j+1;k+1,l-1}.
//  item 4: C_{ij;kl} tied to C_{i+2,j-1;k-2,l+1} and C_{i-2,j+1;k+2,l-1}.
//
// With Prop1Weights::coefficient_matched, items 3 and 4 carry the Leibniz
// weights produced by d^a acting on 2x and 3x^2:
//   k C_{ij;kl} + (i+1) C_{i+1,j-1;k-1,l+1} = 0
//   C(k,2) C_{ij;kl} + C(i+2,2) C_{i+2,j-1;k-2,l+1} = 0
// Prop1Weights::literal drops the weights (plain sign flips). Unknowns outside
// the ansatz count as zero in both.

enum class Prop1Weights { coefficient_matched, literal };

inline ConstraintSystem prop1_oracle(const BiDiffOp<UnknownExpr>& op,
                                     Prop1Weights weights = Prop1Weights::coefficient_matched) {
  const std::set<Unknown> present = unknowns_of(op);
  const bool literal = weights == Prop1Weights::literal;
  ConstraintSystem sys;

  auto var = [&present](int level, int i, int j, int k, int l) {
    Unknown u{level, {i, j}, {k, l}, {}};
    if (i < 0 || j < 0 || k < 0 || l < 0 || !present.count(u)) return UnknownExpr();
    return UnknownExpr::variable(u);
  };
  auto emit = [&sys](const std::string& source, const Unknown& anchor, const UnknownExpr& e) {
    if (e.is_zero()) return;
    Provenance p{source, anchor.level, anchor.key()};
    sys.rows.push_back({row_id(p), p, e});
  };

  for (const Unknown& u : present) {
    if (u.mono != Mono{}) {
      emit("item1", u, UnknownExpr::variable(u));
      continue;
    }
    const int r = u.level, i = u.left.x, j = u.left.y, k = u.right.x, l = u.right.y;
    const UnknownExpr self = UnknownExpr::variable(u);
    auto w = [literal](std::int64_t v) { return Scalar(literal ? 1 : v); };

    if (i > l || j < k) emit("item2", u, self);
    if (j >= 1 && k >= 1) emit("item3a", u, self * w(k) + var(r, i + 1, j - 1, k - 1, l + 1) * w(i + 1));
    if (i >= 1 && l >= 1) emit("item3b", u, self * w(i) + var(r, i - 1, j + 1, k + 1, l - 1) * w(k + 1));
    if (j >= 1 && k >= 2)
      emit("item4a", u, self * w(binomial(k, 2)) + var(r, i + 2, j - 1, k - 2, l + 1) * w(binomial(i + 2, 2)));
    if (i >= 2 && l >= 1)
      emit("item4b", u, self * w(binomial(i, 2)) + var(r, i - 2, j + 1, k + 2, l - 1) * w(binomial(k + 2, 2)));
  }
  return sys;
}

/// Two consistent systems have the same solution space iff their fully
/// reduced substitutions coincide.
struct SolutionSpaceComparison {
  bool equivalent = false;
  std::vector<Unknown> differing;  // unknowns whose images differ
};

inline SolutionSpaceComparison compare_solution_spaces(const EliminationResult& a, const EliminationResult& b) {
  SolutionSpaceComparison out;
  std::set<Unknown> keys;
  for (const auto& [u, e] : a.substitution) keys.insert(u);
  for (const auto& [u, e] : b.substitution) keys.insert(u);
  for (const Unknown& u : keys) {
    auto ia = a.substitution.find(u);
    auto ib = b.substitution.find(u);
    bool same = ia != a.substitution.end() && ib != b.substitution.end() && ia->second == ib->second;
    if (!same) out.differing.push_back(u);
  }
  out.equivalent = out.differing.empty() && a.consistent() == b.consistent();
  return out;
}

}  // namespace invstar
