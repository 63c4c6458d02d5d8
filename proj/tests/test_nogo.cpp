#include <gtest/gtest.h>

#include "invstar/invstar.hpp"

using namespace invstar;

namespace {

Unknown C(int level, int i, int j, int k, int l) { return {level, {i, j}, {k, l}, {}}; }

const Certificate& default_certificate() {
  static const Certificate cert = run_nogo(NogoConfig{});
  return cert;
}

const Json& default_json() {
  static const Json j = to_json(default_certificate());
  return j;
}

NogoConfig with_bounds(int n) {
  NogoConfig cfg;
  cfg.slot_bound_c1 = cfg.slot_bound_c2 = n;
  return cfg;
}

}  // namespace

TEST(Nogo, DefaultIsInfeasible) {
  const Certificate& cert = default_certificate();
  EXPECT_EQ(cert.status, Status::infeasible);
  ASSERT_EQ(cert.targets.size(), 2u);
  ASSERT_TRUE(cert.targets[0].forced);
  ASSERT_TRUE(cert.targets[1].forced);
  EXPECT_EQ(cert.targets[0].forced->unknown, C(1, 0, 1, 1, 0));
  EXPECT_EQ(cert.targets[1].forced->unknown, C(1, 1, 0, 0, 1));
  EXPECT_EQ(cert.targets[0].after.str(), "C1[0,1;1,0]^2");
  EXPECT_EQ(cert.targets[1].after.str(), "C1[1,0;0,1]^2");
  EXPECT_EQ(cert.targets[0].reduction, "invariance-zeros");
  EXPECT_EQ(cert.targets[1].reduction, "invariance-zeros");
  ASSERT_TRUE(cert.contradiction);
  EXPECT_TRUE(cert.contradiction->reduced.is_zero());
  EXPECT_EQ(cert.contradiction->row.rhs, -Scalar::i());
  EXPECT_EQ(cert.contradiction->row.str(), "C1[1,0;0,1] - C1[0,1;1,0] = -i");
}

TEST(Nogo, TargetNames) {
  EXPECT_EQ(target_str(default_targets()[0]), "f_yy g_x h_x");
  EXPECT_EQ(target_str(default_targets()[1]), "f_xx g_y h_y");
  EXPECT_EQ(target_str({{0, 0}, {1, 1}, {0, 0}, {1, 0}}), "f g_xy h * x");
}

TEST(Nogo, ForcedZerosAreSound) {
  const Certificate& cert = default_certificate();
  Substitution forced;
  for (const TargetRecord& t : cert.targets) {
    ASSERT_TRUE(t.forced);
    forced[t.forced->unknown] = UnknownExpr();
    EXPECT_TRUE(substitute(t.after, {{t.forced->unknown, UnknownExpr()}}).is_zero());
    Substitution all = cert.substitution;
    for (const auto& [u, z] : forced) all[u] = z;
    EXPECT_TRUE(substitute(t.before, all).is_zero());
  }
}

TEST(Nogo, CitedFactsCarryProvenance) {
  const Certificate& cert = default_certificate();
  EXPECT_FALSE(cert.facts.empty());
  std::map<std::string, const ConstraintRow*> rows;
  for (const auto& r : cert.rows.rows) rows[r.id] = &r;
  for (const Fact& f : cert.facts) {
    ASSERT_FALSE(f.derivation.empty()) << f.unknown.name();
    UnknownExpr sum;
    for (const auto& [id, m] : f.derivation) {
      ASSERT_TRUE(rows.count(id)) << id;
      EXPECT_FALSE(rows[id]->provenance.source.empty());
      sum += rows[id]->expr * m;
    }
    EXPECT_EQ(sum, UnknownExpr::variable(f.unknown) - f.value);
  }
}

TEST(Nogo, Deterministic) {
  NogoConfig cfg = with_bounds(3);
  EXPECT_EQ(to_json(run_nogo(cfg)).dump(2), to_json(run_nogo(cfg)).dump(2));
  EXPECT_EQ(render_text(run_nogo(cfg)), render_text(run_nogo(cfg)));
}

TEST(Nogo, StableUnderLargerBounds) {
  // The raw coefficients pick up extra high-order products as the bounds grow;
  // everything derived from them must not change.
  auto core = [](const Json& j) {
    Json a = j.at("associativity");
    for (Json& t : a["targets"]) t.erase("expr_before");
    return a.dump() + j.at("contradiction").dump() + j.at("status").dump();
  };
  const std::string base = core(default_json());
  EXPECT_EQ(core(to_json(run_nogo(with_bounds(5)))), base);
  EXPECT_EQ(core(to_json(run_nogo(with_bounds(3)))), base);
  NogoConfig mixed;
  mixed.slot_bound_c1 = 5;
  mixed.slot_bound_c2 = 3;
  EXPECT_EQ(core(to_json(run_nogo(mixed))), base);
}

TEST(Nogo, ConstantFieldsLeaveItUndecided) {
  NogoConfig cfg;
  cfg.hamiltonians = {parse_poly("1"), parse_poly("x"), parse_poly("y")};
  Certificate cert = run_nogo(cfg);
  EXPECT_EQ(cert.status, Status::feasible_undecided);
  EXPECT_FALSE(cert.contradiction);
  for (const auto& t : cert.targets) {
    EXPECT_FALSE(t.forced);
    EXPECT_EQ(t.reduction, "full-substitution");
  }
  Substitution moyal;
  for (const auto& r : cert.rows.rows)
    for (const Unknown& u : r.expr.unknowns())
      moyal[u] = UnknownExpr(moyal_term(u.level).coefficient(u.key()));
  for (const auto& r : cert.rows.rows) EXPECT_TRUE(substitute(r.expr, moyal).is_zero()) << r.id;
  EXPECT_TRUE(check_certificate(to_json(cert)).ok);
}

TEST(Nogo, InvalidConfig) {
  NogoConfig cfg;
  cfg.slot_bound_c1 = 1;
  EXPECT_THROW(run_nogo(cfg), ConfigError);
  cfg = NogoConfig{};
  cfg.hamiltonians.clear();
  EXPECT_THROW(run_nogo(cfg), ConfigError);
  cfg = NogoConfig{};
  cfg.coeff_degree = -1;
  EXPECT_THROW(run_nogo(cfg), ConfigError);
}

TEST(Nogo, SummaryCountsEveryUnknown) {
  const Certificate& cert = default_certificate();
  std::size_t total = 0;
  for (const auto& [level, counts] : cert.summary)
    for (const auto& [rule, n] : counts) total += n;
  EXPECT_EQ(total, 2u * 15 * 15 * 6);
  EXPECT_GT(cert.summary.at(1).at("item1"), 0u);
  EXPECT_GT(cert.summary.at(1).at("item2"), 0u);
  EXPECT_GT(cert.summary.at(2).at("relation"), 0u);
}

TEST(Certificate, JsonShape) {
  const Json& j = default_json();
  EXPECT_EQ(j.at("schema"), 1);
  EXPECT_EQ(j.at("status"), "INFEASIBLE");
  EXPECT_EQ(j.at("engine_version"), kEngineVersion);
  EXPECT_EQ(j.at("config").at("hamiltonians"), Json::array({"x^3", "x^2", "x", "y", "1"}));
  EXPECT_EQ(j.at("config").at("normalization").at("rhs"), "0/1-1/1*i");
  const Json& t0 = j.at("associativity").at("targets").at(0);
  EXPECT_EQ(t0.at("derivs"), Json::parse("[[0,2],[1,0],[1,0]]"));
  EXPECT_EQ(t0.at("forced_zero").at("unknown"), "C1[0,1;1,0]");
  EXPECT_EQ(t0.at("forced_zero").at("justification"), "square term C1[0,1;1,0]^2 = 0 at target f_yy g_x h_x");
  EXPECT_EQ(j.at("contradiction").at("statement"), "0 = -i");
  EXPECT_TRUE(j.at("invariance").at("rows").at(0).contains("provenance"));
  EXPECT_GT(j.at("invariance").at("substitution").size(), 0u);
  EXPECT_GT(j.at("invariance").at("free_unknowns").size(), 0u);
}

TEST(Certificate, TextFollowsProofOrder) {
  std::string text = render_text(default_certificate());
  auto at = [&](const std::string& s) { return text.find(s); };
  ASSERT_NE(at("1. invariance"), std::string::npos);
  EXPECT_LT(at("H = x^3"), at("2. associativity"));
  EXPECT_LT(at("target f_yy g_x h_x"), at("target f_xx g_y h_y"));
  EXPECT_LT(at("target f_xx g_y h_y"), at("3. contradiction"));
  EXPECT_NE(at("forced zero: C1[0,1;1,0] = 0"), std::string::npos);
  EXPECT_NE(at("reduces to: 0 = -i"), std::string::npos);
  EXPECT_NE(at("status: INFEASIBLE"), std::string::npos);
}

TEST(Replay, AcceptsDefaultCertificate) {
  Json j = Json::parse(default_json().dump());
  ReplayResult r = check_certificate(j);
  EXPECT_TRUE(r.ok) << (r.errors.empty() ? "" : r.errors.front());
  EXPECT_LT(r.seconds, 5.0);
}

TEST(Replay, RejectsTampering) {
  auto broken = [](auto&& edit) {
    Json j = default_json();
    edit(j);
    return !check_certificate(j).ok;
  };
  EXPECT_TRUE(broken([](Json& j) { j["status"] = "FEASIBLE-UNDECIDED"; }));
  EXPECT_TRUE(broken([](Json& j) { j["associativity"]["targets"][0]["expr_after"] = "2*C1[0,1;1,0]^2"; }));
  EXPECT_TRUE(broken([](Json& j) { j["associativity"]["targets"][1]["forced_zero"]["unknown"] = "C1[0,2;2,0]"; }));
  EXPECT_TRUE(broken([](Json& j) { j["config"]["normalization"]["rhs"] = "0/1+0/1*i"; }));
  EXPECT_TRUE(broken([](Json& j) {
    Json& fact = j["invariance"]["facts"][0];
    fact["derivation"][0]["coeff"] = "7/1+0/1*i";
  }));
  EXPECT_TRUE(broken([](Json& j) {
    for (Json& row : j["invariance"]["rows"])
      if (row["id"] == j["invariance"]["facts"][0]["derivation"][0]["row"]) row["expr"] = "C1[0,0;0,0]";
  }));
  EXPECT_TRUE(broken([](Json& j) { j["associativity"]["targets"][0]["expr_before"] = "C1[0,1;1,0]"; }));
  EXPECT_TRUE(broken([](Json& j) { j.erase("invariance"); }));
}

TEST(Moyal, ControlReport) {
  MoyalReport rep = run_moyal_controls(2, 3);
  EXPECT_TRUE(rep.assoc.failures.empty());
  for (const auto& c : rep.invariance) {
    bool expect_invariant = !(c.level == 2 && c.generator == "x^3");
    EXPECT_EQ(c.invariant(), expect_invariant) << "C" << c.level << " under " << c.generator;
  }
  EXPECT_EQ(rep.c20_02, Scalar::ratio(-1, 8));
  EXPECT_EQ(rep.c11_11, Scalar::ratio(1, 4));
  EXPECT_TRUE(rep.weighted_relation_holds);
  EXPECT_FALSE(rep.literal_relation_holds);
}

TEST(Moyal, SecondOrderUnderCubicField) {
  BiDiffOp<Scalar> lie = lie_derivative(hamiltonian_vf(parse_poly("x^3")), moyal_term(2));
  BiDiffOp<Scalar> expected;
  expected.add({{0, 1}, {0, 2}, {}}, Scalar::ratio(3, 4));
  expected.add({{0, 2}, {0, 1}, {}}, Scalar::ratio(3, 4));
  EXPECT_EQ(lie, expected);
}
