// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gen.hpp"
#include "invstar/invstar.hpp"

using namespace invstar;
using invstar::testing::Gen;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass;
  std::string detail;
};

Unknown C(int level, int i, int j, int k, int l) { return {level, {i, j}, {k, l}, {}}; }

Outcome ac1() {
  auto t = Clock::now();
  Prop1Report rep = run_prop1(default_hamiltonians(), 1, 4, 2);
  double s = since(t);
  bool ok = rep.equivalent && !rep.free_unknowns.empty() && s < 30;
  return {ok, std::to_string(rep.unknowns) + " unknowns, " + std::to_string(rep.free_unknowns.size()) +
                  " free, verdict " + (rep.equivalent ? "EQUIVALENT" : "DIFFERENT") + ", " + std::to_string(s) + " s"};
}

Outcome ac2(Certificate& cert, double& seconds) {
  auto t = Clock::now();
  cert = run_nogo(NogoConfig{});
  seconds = since(t);
  bool ok = cert.status == Status::infeasible && cert.targets.size() == 2 && cert.targets[0].forced &&
            cert.targets[1].forced && cert.targets[0].target == default_targets()[0] &&
            cert.targets[1].target == default_targets()[1] && cert.targets[0].forced->unknown == C(1, 0, 1, 1, 0) &&
            cert.targets[1].forced->unknown == C(1, 1, 0, 0, 1) && cert.contradiction &&
            cert.contradiction->reduced.is_zero() && cert.contradiction->row.rhs == -Scalar::i() && seconds < 60;
  std::string detail = "status " + status_str(cert.status);
  for (const auto& t2 : cert.targets)
    detail += "; " + target_str(t2.target) + ": " + t2.after.str() + " = 0";
  if (cert.contradiction)
    detail += "; " + cert.contradiction->row.str() + " reduces to " + cert.contradiction->reduced.str() + " = " +
              cert.contradiction->row.rhs.str();
  return {ok, detail + "; " + std::to_string(seconds) + " s"};
}

Outcome ac3(const Json& base) {
  auto core = [](const Json& j) {
    Json c = j;
    c.erase("config");
    c.erase("invariance");
    for (Json& t : c["associativity"]["targets"]) t.erase("expr_before");
    return c.dump();
  };
  std::string ref = core(base);
  bool ok = true;
  std::string detail = "bounds 4";
  for (int n : {5, 6}) {
    NogoConfig cfg;
    cfg.slot_bound_c1 = cfg.slot_bound_c2 = n;
    auto t = Clock::now();
    bool same = core(to_json(run_nogo(cfg))) == ref;
    ok = ok && same;
    detail += std::string(", ") + std::to_string(n) + (same ? " identical" : " DIFFERENT") + " (" +
              std::to_string(since(t)) + " s)";
  }
  return {ok, detail};
}

Outcome ac4() {
  auto t = Clock::now();
  AssocReport rep = assoc_check_numeric(moyal_product(4), 4, 6);
  bool assoc_ok = rep.failures.empty();
  bool inv_ok = true;
  for (const Poly& h : default_hamiltonians())
    inv_ok = inv_ok && lie_derivative(hamiltonian_vf(h), moyal_term(1)).is_zero();
  return {assoc_ok && inv_ok, std::to_string(rep.triples) + " triples, " + std::to_string(rep.failures.size()) +
                                  " associativity failures; C1 invariant under all generators: " +
                                  (inv_ok ? "yes" : "no") + "; " + std::to_string(since(t)) + " s"};
}

Outcome ac5() {
  BiDiffOp<Scalar> c2 = moyal_term(2);
  BiDiffOp<Scalar> lie = lie_derivative(hamiltonian_vf(parse_poly("x^2")), c2);
  // independent expansion: (-i/2)^2/2 * (d_x (x) d_y - d_y (x) d_x)^2
  Scalar pre = Scalar::ratio(-1, 8);
  Scalar c20_02 = pre * Scalar(1), c11_11 = pre * Scalar(-2);
  bool values_ok = c2.coefficient({{2, 0}, {0, 2}, {}}) == c20_02 && c2.coefficient({{1, 1}, {1, 1}, {}}) == c11_11 &&
                   c20_02 == Scalar::ratio(-1, 8) && c11_11 == Scalar::ratio(1, 4);
  bool literal_violated = !(c20_02 == -c11_11);
  bool lie_nonzero = !lie.is_zero();
  std::string detail = "L_{2x d_y}(C2) = " + std::string(lie_nonzero ? "nonzero" : "0") +
                       "; C[2,0;0,2] = " + c20_02.str() + ", C[1,1;1,1] = " + c11_11.str() +
                       ", unweighted relation " + (literal_violated ? "violated" : "holds");
  BiDiffOp<Scalar> cubic = lie_derivative(hamiltonian_vf(parse_poly("x^3")), c2);
  detail += "; L_{3x^2 d_y}(C2) has " + std::to_string(cubic.size()) + " terms";
  return {lie_nonzero && values_ok && literal_violated, detail};
}

Outcome ac6() {
  Gen gen(2024);
  int failures = 0;
  const int n = 250;
  auto direct = [](const BiDiffOp<Scalar>& b, const Poly& f, const Poly& g) {
    Poly out;
    for (const auto& [k, c] : b.terms())
      out += Poly::monomial(k.mono, c) * derivative(f, k.left.x, k.left.y) * derivative(g, k.right.x, k.right.y);
    return out;
  };
  for (int k = 0; k < n; ++k) {
    Poly f = gen.poly(5), g = gen.poly(5), h = gen.poly(4);
    if (!(poisson(f, poisson(g, h)) + poisson(g, poisson(h, f)) + poisson(h, poisson(f, g))).is_zero()) ++failures;
    if (!(hamiltonian_vf(poisson(f, g)) == commutator(hamiltonian_vf(f), hamiltonian_vf(g)))) ++failures;
  }
  for (int k = 0; k < n; ++k) {
    BiDiffOp<Scalar> a = gen.bidiff(2, 2, 3), b = gen.bidiff(2, 2, 3);
    Poly f = gen.poly(4), g = gen.poly(4), h = gen.poly(4);
    if (!(apply_tri(compose_left(a, b), f, g, h) == direct(a, direct(b, f, g), h))) ++failures;
    if (!(apply_tri(compose_right(a, b), f, g, h) == direct(a, f, direct(b, g, h)))) ++failures;
    if (!(apply_tri(lift_product(a, Side::left), f, g, h) == direct(a, f * g, h))) ++failures;
    if (!(apply_tri(lift_product(a, Side::right), f, g, h) == direct(a, f, g * h))) ++failures;
  }
  for (int k = 0; k < n; ++k) {
    FormalStarProduct<Scalar> star({gen.bidiff(2, 2, 3), gen.bidiff(2, 1, 3)});
    int order = gen.uniform(1, 3);
    Poly f = gen.poly(4), g = gen.poly(4), h = gen.poly(4);
    Poly nested;
    for (int r = 0; r <= order; ++r) {
      nested += direct(star.term(r), direct(star.term(order - r), f, g), h);
      nested -= direct(star.term(r), f, direct(star.term(order - r), g, h));
    }
    if (!(apply_tri(assoc_residual(star, order), f, g, h) == nested)) ++failures;
  }
  return {failures == 0, std::to_string(n) + " instances per property, " + std::to_string(failures) + " failures"};
}

Outcome ac7(const Json& cert) {
  std::string text = cert.dump(2);
  auto t = Clock::now();
  ReplayResult r = check_certificate(Json::parse(text));
  double s = since(t);
  std::string detail = std::string(r.ok ? "valid" : "invalid") + ", " + std::to_string(s) + " s";
  if (!r.errors.empty()) detail += ": " + r.errors.front();
  return {r.ok && s < 5, detail};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](const char* id, const char* name, const Outcome& o) {
    std::printf("%s %s: %s (%s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  };

  report("AC1", "invariance system equals closed-form relations", ac1());
  Certificate cert;
  double seconds = 0;
  report("AC2", "no-go certificate", ac2(cert, seconds));
  Json json = to_json(cert);
  report("AC3", "stabilization across slot bounds", ac3(json));
  report("AC4", "Moyal positive control", ac4());
  report("AC5", "Moyal negative control", ac5());
  report("AC6", "kernel properties", ac6());
  report("AC7", "certificate replay", ac7(json));
  std::printf("%d of 7 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
