#pragma once

// Independent certificate checker. Reads only the JSON certificate and uses
// only exact expression arithmetic: no ansatz, Lie derivative, elimination or
// composition code is involved.
//
// Checked:
//  - each cited fact u = v is the stated combination of certificate rows;
//  - each target's reduced expression follows from its raw coefficient by the
//    cited facts and earlier forced zeros, and has the shape c*u^2, c != 0;
//  - the normalization row reduces to a false constant equation;
//  - the status agrees with the above.
// Trusted: the rows themselves and the raw target coefficients.

#include <chrono>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "invstar/parse.hpp"
#include "invstar/unknowns.hpp"

namespace invstar {

struct ReplayResult {
  bool ok = true;
  std::vector<std::string> log;
  std::vector<std::string> errors;
  double seconds = 0;

  void fail(std::string msg) {
    ok = false;
    errors.push_back(std::move(msg));
  }
};

namespace replay_detail {

using Images = std::map<Unknown, UnknownExpr>;

inline UnknownExpr reduce(UnknownExpr e, const Images& images) {
  for (std::size_t pass = 0; pass <= images.size(); ++pass) {
    bool hit = false;
    for (const Unknown& u : e.unknowns()) hit = hit || images.count(u);
    if (!hit) return e;
    e = e.substituted(images);
  }
  throw std::runtime_error("cyclic substitution");
}

}  // namespace replay_detail

inline ReplayResult check_certificate(const nlohmann::json& cert) {
  using replay_detail::Images;
  auto start = std::chrono::steady_clock::now();
  ReplayResult res;
  try {
    if (cert.at("schema").get<int>() != 1) res.fail("unsupported schema");

    std::map<std::string, UnknownExpr> rows;
    for (const auto& r : cert.at("invariance").at("rows")) {
      const auto& p = r.at("provenance");
      if (p.at("source").get<std::string>().empty() || p.at("key").get<std::string>().empty())
        res.fail("row " + r.at("id").get<std::string>() + " lacks provenance");
      rows[r.at("id").get<std::string>()] = parse_unknown_expr(r.at("expr").get<std::string>());
    }
    res.log.push_back("loaded " + std::to_string(rows.size()) + " rows");

    Images facts, zero_facts;
    for (const auto& f : cert.at("invariance").at("facts")) {
      Unknown u = parse_unknown(f.at("unknown").get<std::string>());
      UnknownExpr value = parse_unknown_expr(f.at("value").get<std::string>());
      if (!value.is_linear()) res.fail("fact " + u.name() + " is not linear");
      for (const Unknown& v : value.unknowns())
        if (!(v < u)) res.fail("fact " + u.name() + " mentions non-smaller unknown " + v.name());
      UnknownExpr sum;
      for (const auto& step : f.at("derivation")) {
        auto it = rows.find(step.at("row").get<std::string>());
        if (it == rows.end()) {
          res.fail("fact " + u.name() + " cites unknown row " + step.at("row").get<std::string>());
          continue;
        }
        sum += it->second * parse_exact_scalar(step.at("coeff").get<std::string>());
      }
      if (!(sum == UnknownExpr::variable(u) - value)) res.fail("derivation of " + u.name() + " does not combine");
      facts[u] = value;
      if (value.is_zero()) zero_facts[u] = value;
    }
    res.log.push_back("verified " + std::to_string(facts.size()) + " facts");

    Images forced;
    auto with_forced = [&forced](Images base) {
      for (const auto& [u, z] : forced) base[u] = z;
      return base;
    };
    for (const auto& t : cert.at("associativity").at("targets")) {
      const std::string name = t.value("name", std::string("target"));
      UnknownExpr before = parse_unknown_expr(t.at("expr_before").get<std::string>());
      UnknownExpr after = parse_unknown_expr(t.at("expr_after").get<std::string>());
      const std::string how = t.at("reduction").get<std::string>();
      Images images = with_forced(how == "invariance-zeros" ? zero_facts : facts);
      if (!(replay_detail::reduce(before, images) == after)) {
        res.fail(name + ": reduction does not reproduce expr_after");
        continue;
      }
      if (t.at("forced_zero").is_null()) {
        res.log.push_back(name + ": no forced zero");
        continue;
      }
      Unknown u = parse_unknown(t.at("forced_zero").at("unknown").get<std::string>());
      Scalar c = parse_exact_scalar(t.at("forced_zero").at("coefficient").get<std::string>());
      if (c.is_zero() || !(after == UnknownExpr::variable(u) * UnknownExpr::variable(u) * c)) {
        res.fail(name + ": expr_after is not " + c.str() + "*" + u.name() + "^2");
        continue;
      }
      forced[u] = UnknownExpr();
      res.log.push_back(name + ": " + after.str() + " = 0 forces " + u.name() + " = 0");
    }

    const auto& norm = cert.at("config").at("normalization");
    UnknownExpr lhs = parse_unknown_expr(norm.at("lhs").get<std::string>());
    Scalar rhs = parse_exact_scalar(norm.at("rhs").get<std::string>());
    UnknownExpr reduced = replay_detail::reduce(lhs, with_forced(facts));
    bool contradiction = reduced.is_constant() && !(reduced.constant_term() == rhs);
    const std::string status = cert.at("status").get<std::string>();
    if (contradiction) {
      res.log.push_back("normalization reduces to " + reduced.str() + " = " + rhs.str());
      const auto& c = cert.at("contradiction");
      if (c.is_null() || parse_exact_scalar(c.at("reduced").get<std::string>()) != reduced.constant_term())
        res.fail("contradiction record does not match the replayed reduction");
      if (status != "INFEASIBLE") res.fail("status should be INFEASIBLE");
    } else {
      res.log.push_back("normalization reduces to " + reduced.str() + " = " + rhs.str() + ", consistent");
      if (status == "INFEASIBLE") res.fail("status INFEASIBLE without a replayable contradiction");
    }
  } catch (const std::exception& e) {
    res.fail(std::string("malformed certificate: ") + e.what());
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace invstar
