#pragma once

// End-to-end pipeline: symbolic ansatz -> invariance rows -> elimination ->
// order-hbar^2 associativity targets -> forced zeros -> contradiction.

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "invstar/associativity.hpp"
#include "invstar/constraints.hpp"
#include "invstar/operators.hpp"
#include "invstar/parse.hpp"
#include "invstar/unknowns.hpp"

namespace invstar {

inline constexpr const char* kEngineVersion = "invstar 1.0.0";

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// lhs = rhs, imposed on C^1 by the bracket condition.
struct NormalizationRow {
  UnknownExpr lhs;
  Scalar rhs;

  std::string str() const { return lhs.str() + " = " + rhs.str(); }
};

inline Unknown c1(int i, int j, int k, int l) { return {1, {i, j}, {k, l}, {}}; }

/// C^1_{10;01} - C^1_{01;10} = -i
inline NormalizationRow bracket_normalization() {
  return {UnknownExpr::variable(c1(1, 0, 0, 1)) - UnknownExpr::variable(c1(0, 1, 1, 0)), Scalar(0) - Scalar::i()};
}

/// f_yy g_x h_x and f_xx g_y h_y.
inline std::vector<ResidualTarget> default_targets() {
  return {{{0, 2}, {1, 0}, {1, 0}, {}}, {{2, 0}, {0, 1}, {0, 1}, {}}};
}

inline std::vector<Poly> default_hamiltonians() {
  return {parse_poly("x^3"), parse_poly("x^2"), parse_poly("x"), parse_poly("y"), parse_poly("1")};
}

struct NogoConfig {
  std::vector<Poly> hamiltonians = default_hamiltonians();
  int slot_bound_c1 = 4;
  int slot_bound_c2 = 4;
  int coeff_degree = 2;
  std::vector<ResidualTarget> targets = default_targets();
  NormalizationRow normalization = bracket_normalization();

  void validate() const {
    if (hamiltonians.empty()) throw ConfigError("at least one Hamiltonian is required");
    if (slot_bound_c1 < 2 || slot_bound_c2 < 2) throw ConfigError("slot bounds must be at least 2");
    if (coeff_degree < 0) throw ConfigError("coefficient degree must be nonnegative");
    if (targets.empty()) throw ConfigError("at least one residual target is required");
  }
};

inline std::string target_str(const ResidualTarget& t) {
  auto slot = [](char fn, DerivIndex d) {
    std::string s(1, fn);
    if (d.order() == 0) return s;
    s += "_" + std::string(d.x, 'x') + std::string(d.y, 'y');
    return s;
  };
  std::string out = slot('f', t.f) + " " + slot('g', t.g) + " " + slot('h', t.h);
  if (t.mono != Mono{}) out += " * " + mono_str(t.mono);
  return out;
}

/// Which closed-form family an eliminated unknown falls under.
inline std::string classify(const Unknown& u, const UnknownExpr& image) {
  if (!image.is_zero()) return "relation";
  if (u.mono != Mono{}) return "item1";
  if (u.left.x > u.right.y || u.left.y < u.right.x) return "item2";
  return "zero";
}

struct Fact {
  Unknown unknown;
  UnknownExpr value;
  std::string rule;
  std::vector<std::pair<std::string, Scalar>> derivation;  // row id, multiplier
};

struct ForcedZero {
  Unknown unknown;
  Scalar coefficient;
  std::string justification;
};

struct TargetRecord {
  ResidualTarget target;
  UnknownExpr before;
  std::string reduction;  // "invariance-zeros" or "full-substitution"
  UnknownExpr after;
  std::optional<ForcedZero> forced;
};

struct Contradiction {
  NormalizationRow row;
  Scalar reduced;  // value of row.lhs once facts and forced zeros are applied
  std::vector<std::string> provenance;
};

enum class Status { infeasible, feasible_undecided };

inline std::string status_str(Status s) { return s == Status::infeasible ? "INFEASIBLE" : "FEASIBLE-UNDECIDED"; }

struct GeneratorRows {
  std::string generator;
  std::string field;
  std::map<int, std::size_t> rows_per_level;
};

struct Certificate {
  Status status = Status::feasible_undecided;
  NogoConfig config;
  std::vector<GeneratorRows> generators;
  ConstraintSystem rows;
  Substitution substitution;
  std::vector<Unknown> free_unknowns;
  std::map<int, std::map<std::string, std::size_t>> summary;  // level -> rule -> count
  std::vector<Fact> facts;
  std::vector<TargetRecord> targets;
  std::optional<Contradiction> contradiction;
  std::string engine_version = kEngineVersion;
};

namespace detail {

/// c * u^2 with c != 0.
inline std::optional<std::pair<Unknown, Scalar>> square_term(const UnknownExpr& e) {
  if (e.terms().size() != 1) return std::nullopt;
  const auto& [m, c] = *e.terms().begin();
  if (m.size() != 2 || m[0] != m[1] || c.is_zero()) return std::nullopt;
  return std::pair{m[0], c};
}

inline Substitution overlay(Substitution base, const std::map<Unknown, ForcedZero>& forced) {
  for (const auto& [u, fz] : forced) base[u] = UnknownExpr();
  return base;
}

}  // namespace detail

inline Certificate run_nogo(const NogoConfig& cfg) {
  cfg.validate();
  Certificate cert;
  cert.config = cfg;

  // (1) symbolic C^1, C^2
  const std::vector<BiDiffOp<UnknownExpr>> ansatz = {build_ansatz(1, cfg.slot_bound_c1, cfg.coeff_degree),
                                                     build_ansatz(2, cfg.slot_bound_c2, cfg.coeff_degree)};
  std::set<Unknown> universe;
  for (const auto& op : ansatz) {
    auto us = unknowns_of(op);
    universe.insert(us.begin(), us.end());
  }

  // (2) invariance at both levels, then elimination
  for (const Poly& h : cfg.hamiltonians) {
    VectorField field = hamiltonian_vf(h);
    GeneratorRows g{h.str(), field.str(), {}};
    for (std::size_t level = 0; level < ansatz.size(); ++level) {
      ConstraintSystem part = invariance_rows(field, ansatz[level], h.str());
      g.rows_per_level[static_cast<int>(level) + 1] = part.size();
      cert.rows.append(part);
    }
    cert.generators.push_back(std::move(g));
  }
  EliminationResult elim = eliminate(cert.rows);
  cert.substitution = elim.substitution;
  cert.free_unknowns = free_unknowns(universe, elim.substitution);
  for (const auto& [u, img] : elim.substitution) ++cert.summary[u.level][classify(u, img)];
  for (const Unknown& u : cert.free_unknowns) ++cert.summary[u.level]["free"];

  const Substitution zeros = vanishing_part(elim.substitution);
  std::set<Unknown> cited;
  std::map<Unknown, ForcedZero> forced;

  // (3)-(4) order-hbar^2 residual at each target
  FormalStarProduct<UnknownExpr> star({ansatz[0], ansatz[1]});
  for (const ResidualTarget& t : cfg.targets) {
    TargetRecord rec{t, residual_coefficient(star, 2, t), "invariance-zeros", {}, std::nullopt};
    rec.after = substitute(rec.before, detail::overlay(zeros, forced));
    const Substitution* used = &zeros;
    if (!detail::square_term(rec.after)) {
      rec.reduction = "full-substitution";
      rec.after = substitute(rec.before, detail::overlay(elim.substitution, forced));
      used = &elim.substitution;
    }
    for (const Unknown& u : rec.before.unknowns())
      if (used->count(u) && !forced.count(u)) cited.insert(u);
    if (auto sq = detail::square_term(rec.after)) {
      ForcedZero fz{sq->first, sq->second,
                    "square term " + rec.after.str() + " = 0 at target " + target_str(t)};
      forced.emplace(fz.unknown, fz);
      rec.forced = fz;
    }
    cert.targets.push_back(std::move(rec));
  }

  // (5)-(6) normalization row under all derived facts
  const NormalizationRow& norm = cfg.normalization;
  UnknownExpr reduced = substitute(norm.lhs, detail::overlay(elim.substitution, forced));
  for (const Unknown& u : norm.lhs.unknowns())
    if (elim.substitution.count(u) && !forced.count(u)) cited.insert(u);
  if (reduced.is_constant() && !(reduced.constant_term() == norm.rhs)) {
    Contradiction c{norm, reduced.constant_term(), {}};
    c.provenance.push_back("normalization " + norm.str());
    for (const auto& rec : cert.targets)
      if (rec.forced) c.provenance.push_back("forced zero " + rec.forced->unknown.name() + " from " +
                                             rec.forced->justification);
    for (const Unknown& u : norm.lhs.unknowns())
      if (elim.substitution.count(u) && !forced.count(u))
        c.provenance.push_back("invariance fact " + u.name() + " = " + elim.substitution.at(u).str());
    cert.contradiction = std::move(c);
    cert.status = Status::infeasible;
  }

  for (const Unknown& u : cited) {
    Fact f{u, elim.substitution.at(u), classify(u, elim.substitution.at(u)), {}};
    for (const auto& [k, m] : elim.derivations.at(u)) f.derivation.emplace_back(cert.rows.rows[k].id, m);
    cert.facts.push_back(std::move(f));
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Invariance rows against the closed-form relations.

struct Prop1Report {
  int level = 1;
  int slot_bound = 4;
  int coeff_degree = 2;
  std::size_t unknowns = 0;
  std::size_t invariance_rows = 0;
  std::size_t oracle_rows = 0;
  bool equivalent = false;
  bool literal_equivalent = false;
  std::vector<Unknown> free_unknowns;
  std::vector<Unknown> differing;
  std::vector<Unknown> literal_differing;
  EliminationResult invariance;
  EliminationResult oracle;
};

inline Prop1Report run_prop1(const std::vector<Poly>& hamiltonians, int level, int slot_bound, int coeff_degree) {
  if (slot_bound < 0 || coeff_degree < 0) throw ConfigError("bounds must be nonnegative");
  Prop1Report rep;
  rep.level = level;
  rep.slot_bound = slot_bound;
  rep.coeff_degree = coeff_degree;
  BiDiffOp<UnknownExpr> op = build_ansatz(level, slot_bound, coeff_degree);
  std::set<Unknown> universe = unknowns_of(op);
  rep.unknowns = universe.size();

  ConstraintSystem inv;
  for (const Poly& h : hamiltonians) inv.append(invariance_rows(hamiltonian_vf(h), op, h.str()));
  ConstraintSystem oracle = prop1_oracle(op);
  rep.invariance_rows = inv.size();
  rep.oracle_rows = oracle.size();

  rep.invariance = eliminate(inv);
  rep.oracle = eliminate(oracle);
  EliminationResult literal = eliminate(prop1_oracle(op, Prop1Weights::literal));

  SolutionSpaceComparison cmp = compare_solution_spaces(rep.invariance, rep.oracle);
  SolutionSpaceComparison lit = compare_solution_spaces(rep.invariance, literal);
  rep.equivalent = cmp.equivalent;
  rep.differing = cmp.differing;
  rep.literal_equivalent = lit.equivalent;
  rep.literal_differing = lit.differing;
  rep.free_unknowns = free_unknowns(universe, rep.invariance.substitution);
  return rep;
}

// ---------------------------------------------------------------------------
// Moyal controls.

struct InvarianceCheck {
  int level;
  std::string generator;
  BiDiffOp<Scalar> lie;
  bool invariant() const { return lie.is_zero(); }
};

struct MoyalReport {
  AssocReport assoc;
  std::vector<InvarianceCheck> invariance;
  Scalar c20_02;
  Scalar c11_11;
  /// 2 C_{20;02} + C_{11;11} = 0, the x^2 relation with Leibniz weights.
  bool weighted_relation_holds = false;
  /// C_{20;02} = -C_{11;11}, the unweighted sign flip.
  bool literal_relation_holds = false;
};

inline MoyalReport run_moyal_controls(int max_order, int max_degree,
                                      const std::vector<Poly>& hamiltonians = default_hamiltonians()) {
  if (max_order < 1 || max_degree < 0) throw ConfigError("order must be positive and degree nonnegative");
  MoyalReport rep;
  FormalStarProduct<Scalar> star = moyal_product(max_order);
  rep.assoc = assoc_check_numeric(star, max_order, max_degree);
  for (int r = 1; r <= max_order; ++r)
    for (const Poly& h : hamiltonians) rep.invariance.push_back({r, h.str(), lie_derivative(hamiltonian_vf(h), star.term(r))});
  BiDiffOp<Scalar> c2 = moyal_term(2);
  rep.c20_02 = c2.coefficient({{2, 0}, {0, 2}, {}});
  rep.c11_11 = c2.coefficient({{1, 1}, {1, 1}, {}});
  rep.weighted_relation_holds = (rep.c20_02 * Scalar(2) + rep.c11_11).is_zero();
  rep.literal_relation_holds = rep.c20_02 == -rep.c11_11;
  return rep;
}

}  // namespace invstar
