#pragma once

// Text and JSON renderings of certificates and reports. JSON objects use
// sorted keys and scalars are exact "a/b+c/d*i" strings, so identical inputs
// serialize byte-identically.

#include <sstream>
#include <string>

#include <json.hpp>

#include "invstar/nogo.hpp"

namespace invstar {

using Json = nlohmann::json;

inline Json to_json(DerivIndex d) { return Json::array({d.x, d.y}); }
inline Json to_json(Mono m) { return Json::array({m.x, m.y}); }

inline Json to_json(const ResidualTarget& t) {
  return {{"derivs", Json::array({to_json(t.f), to_json(t.g), to_json(t.h)})}, {"mono", to_json(t.mono)}};
}

inline Json to_json(const NormalizationRow& n) { return {{"lhs", n.lhs.str()}, {"rhs", n.rhs.exact()}}; }

inline Json to_json(const NogoConfig& c) {
  Json hs = Json::array();
  for (const Poly& h : c.hamiltonians) hs.push_back(h.str());
  Json ts = Json::array();
  for (const auto& t : c.targets) ts.push_back(to_json(t));
  return {{"hamiltonians", hs},        {"slot_bound_c1", c.slot_bound_c1},      {"slot_bound_c2", c.slot_bound_c2},
          {"coeff_degree", c.coeff_degree}, {"targets", ts}, {"normalization", to_json(c.normalization)}};
}

inline Json to_json(const ConstraintRow& r) {
  return {{"id", r.id},
          {"provenance",
           {{"source", r.provenance.source}, {"level", r.provenance.level}, {"key", key_str(r.provenance.key)}}},
          {"expr", r.expr.str()}};
}

inline Json to_json(const ConstraintSystem& sys) {
  Json out = Json::array();
  for (const auto& r : sys.rows) out.push_back(to_json(r));
  return out;
}

inline Json to_json(const Certificate& cert) {
  Json subst = Json::array();
  for (const auto& [u, e] : cert.substitution) subst.push_back({{"unknown", u.name()}, {"expr", e.str()}});
  Json free = Json::array();
  for (const Unknown& u : cert.free_unknowns) free.push_back(u.name());

  Json facts = Json::array();
  for (const Fact& f : cert.facts) {
    Json der = Json::array();
    for (const auto& [id, m] : f.derivation) der.push_back({{"row", id}, {"coeff", m.exact()}});
    facts.push_back({{"unknown", f.unknown.name()}, {"value", f.value.str()}, {"rule", f.rule}, {"derivation", der}});
  }

  Json gens = Json::array();
  for (const auto& g : cert.generators) {
    Json per = Json::object();
    for (const auto& [level, n] : g.rows_per_level) per[std::to_string(level)] = n;
    gens.push_back({{"hamiltonian", g.generator}, {"field", g.field}, {"rows", per}});
  }
  Json summary = Json::object();
  for (const auto& [level, counts] : cert.summary) summary[std::to_string(level)] = counts;

  Json targets = Json::array();
  for (const TargetRecord& t : cert.targets) {
    Json j = to_json(t.target);
    j["name"] = target_str(t.target);
    j["expr_before"] = t.before.str();
    j["reduction"] = t.reduction;
    j["expr_after"] = t.after.str();
    j["forced_zero"] = t.forced ? Json{{"unknown", t.forced->unknown.name()},
                                       {"coefficient", t.forced->coefficient.exact()},
                                       {"justification", t.forced->justification}}
                                : Json(nullptr);
    targets.push_back(j);
  }

  Json contradiction = nullptr;
  if (cert.contradiction) {
    const Contradiction& c = *cert.contradiction;
    contradiction = {{"row", c.row.str()},
                     {"reduced", c.reduced.exact()},
                     {"statement", c.reduced.str() + " = " + c.row.rhs.str()},
                     {"provenance", c.provenance}};
  }

  return {{"schema", 1},
          {"status", status_str(cert.status)},
          {"engine_version", cert.engine_version},
          {"config", to_json(cert.config)},
          {"invariance",
           {{"generators", gens},
            {"rows", to_json(cert.rows)},
            {"substitution", subst},
            {"free_unknowns", free},
            {"summary", summary},
            {"facts", facts}}},
          {"associativity", {{"order", 2}, {"targets", targets}}},
          {"contradiction", contradiction}};
}

inline std::string render_text(const Certificate& cert) {
  std::ostringstream os;
  const NogoConfig& c = cert.config;
  os << "no-go certificate (" << cert.engine_version << ")\n";
  os << "status: " << status_str(cert.status) << "\n";
  os << "hamiltonians:";
  for (std::size_t k = 0; k < c.hamiltonians.size(); ++k) os << (k ? ", " : " ") << c.hamiltonians[k].str();
  os << "\nslot bounds: C1 <= " << c.slot_bound_c1 << ", C2 <= " << c.slot_bound_c2
     << "; coefficient degree <= " << c.coeff_degree << "\n\n";

  os << "1. invariance\n";
  for (const auto& g : cert.generators) {
    os << "  H = " << g.generator << ": X = " << g.field << ";";
    for (const auto& [level, n] : g.rows_per_level) os << " level " << level << ": " << n << " rows";
    os << "\n";
  }
  os << "  eliminated " << cert.substitution.size() << " unknowns, " << cert.free_unknowns.size() << " free\n";
  for (const auto& [level, counts] : cert.summary) {
    os << "  level " << level << ":";
    for (const auto& [rule, n] : counts) os << " " << rule << "=" << n;
    os << "\n";
  }

  os << "\n2. associativity at order 2\n";
  for (const TargetRecord& t : cert.targets) {
    os << "  target " << target_str(t.target) << "\n";
    os << "    raw coefficient: " << t.before.terms().size() << " terms\n";
    os << "    after " << t.reduction << ": " << t.after.str() << " = 0\n";
    if (t.forced)
      os << "    forced zero: " << t.forced->unknown.name() << " = 0\n";
    else
      os << "    not of the form c*u^2; unreduced: " << t.before.str() << "\n";
  }

  os << "\n3. contradiction\n";
  if (cert.contradiction) {
    const Contradiction& k = *cert.contradiction;
    os << "  normalization: " << k.row.str() << "\n";
    os << "  reduces to: " << k.reduced.str() << " = " << k.row.rhs.str() << "\n";
    for (const auto& p : k.provenance) os << "  from " << p << "\n";
  } else {
    os << "  none: normalization row does not reduce to a false constant equation\n";
  }
  os << "\ncited invariance facts: " << cert.facts.size() << "\n";
  for (const Fact& f : cert.facts)
    os << "  " << f.unknown.name() << " = " << f.value.str() << " [" << f.rule << ", " << f.derivation.size()
       << " rows]\n";
  return os.str();
}

inline Json to_json(const Prop1Report& r) {
  auto names = [](const std::vector<Unknown>& us) {
    Json a = Json::array();
    for (const Unknown& u : us) a.push_back(u.name());
    return a;
  };
  return {{"level", r.level},
          {"slot_bound", r.slot_bound},
          {"coeff_degree", r.coeff_degree},
          {"unknowns", r.unknowns},
          {"invariance_rows", r.invariance_rows},
          {"oracle_rows", r.oracle_rows},
          {"verdict", r.equivalent ? "EQUIVALENT" : "DIFFERENT"},
          {"literal_verdict", r.literal_equivalent ? "EQUIVALENT" : "DIFFERENT"},
          {"free_unknowns", names(r.free_unknowns)},
          {"differing", names(r.differing)},
          {"literal_differing", names(r.literal_differing)}};
}

inline std::string render_text(const Prop1Report& r) {
  std::ostringstream os;
  os << "level " << r.level << ", slot bound " << r.slot_bound << ", coefficient degree " << r.coeff_degree << "\n";
  os << "unknowns: " << r.unknowns << "; invariance rows: " << r.invariance_rows
     << "; oracle rows: " << r.oracle_rows << "\n";
  os << (r.equivalent ? "EQUIVALENT" : "DIFFERENT") << "\n";
  os << "unweighted relations: " << (r.literal_equivalent ? "EQUIVALENT" : "DIFFERENT") << "\n";
  for (const Unknown& u : r.differing) os << "  differs at " << u.name() << "\n";
  os << "free unknowns (" << r.free_unknowns.size() << "):";
  for (const Unknown& u : r.free_unknowns) os << " " << u.name();
  os << "\n";
  for (const auto& [u, e] : r.invariance.substitution)
    if (!e.is_zero()) os << "  " << u.name() << " = " << e.str() << "\n";
  return os.str();
}

inline Json to_json(const MoyalReport& r) {
  Json fails = Json::array();
  for (const auto& f : r.assoc.failures) fails.push_back(f.str());
  Json inv = Json::array();
  for (const auto& c : r.invariance)
    inv.push_back({{"level", c.level}, {"hamiltonian", c.generator}, {"invariant", c.invariant()},
                   {"lie_derivative", c.lie.str()}});
  return {{"max_order", r.assoc.max_order},
          {"max_degree", r.assoc.max_degree},
          {"triples", r.assoc.triples},
          {"associativity_failures", fails},
          {"invariance", inv},
          {"c20_02", r.c20_02.exact()},
          {"c11_11", r.c11_11.exact()},
          {"weighted_relation_holds", r.weighted_relation_holds},
          {"literal_relation_holds", r.literal_relation_holds}};
}

inline std::string render_text(const MoyalReport& r) {
  std::ostringstream os;
  os << "associativity: orders 1.." << r.assoc.max_order << ", monomials of degree <= " << r.assoc.max_degree
     << ", " << r.assoc.triples << " triples, " << r.assoc.failures.size() << " failures\n";
  os << r.assoc.str();
  os << "invariance:\n";
  for (const auto& c : r.invariance) {
    os << "  C" << c.level << " under H = " << c.generator << ": ";
    if (c.invariant())
      os << "invariant\n";
    else {
      os << "NOT invariant\n";
      std::istringstream lines(c.lie.str());
      for (std::string line; std::getline(lines, line);) os << "    " << line << "\n";
    }
  }
  os << "C2[2,0;0,2] = " << r.c20_02.str() << ", C2[1,1;1,1] = " << r.c11_11.str() << "\n";
  os << "  2*C[2,0;0,2] + C[1,1;1,1] = 0: " << (r.weighted_relation_holds ? "holds" : "violated") << "\n";
  os << "  C[2,0;0,2] = -C[1,1;1,1]: " << (r.literal_relation_holds ? "holds" : "violated") << "\n";
  return os.str();
}

}  // namespace invstar
