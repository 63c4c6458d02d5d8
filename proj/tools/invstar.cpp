// invstar: invariant star product workbench.
//
//   invstar nogo [--hamiltonians x^3,x^2,x,y,1] [--slot-bound-c1 4] ...
//   invstar prop1 --level 1 --slot-bound-c1 4 --coeff-degree 2
//   invstar moyal --order 4 --max-degree 6
//   invstar invariance --hamiltonians x,y --level 1 --slot-bound-c1 2
//   invstar check certificate.json

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "invstar/invstar.hpp"

namespace {

using namespace invstar;

std::vector<Poly> parse_hamiltonians(const std::string& list) {
  std::vector<Poly> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = list.find(',', start);
    std::string item = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      out.push_back(parse_poly(item));
    } catch (const ParseError& e) {
      // report the position within the whole argument
      throw ParseError(start + e.position(), e.reason());
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Options {
  std::string hamiltonians = "x^3,x^2,x,y,1";
  int slot_bound_c1 = 4;
  int slot_bound_c2 = 4;
  int coeff_degree = 2;
  int order = 4;
  int max_degree = 6;
  int level = 1;
  std::string format = "text";
  std::string out;
  std::string certificate;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + o.out);
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int run(const std::string& cmd, const Options& o) {
  const bool json = o.format == "json";
  if (cmd == "nogo") {
    NogoConfig cfg;
    cfg.hamiltonians = parse_hamiltonians(o.hamiltonians);
    cfg.slot_bound_c1 = o.slot_bound_c1;
    cfg.slot_bound_c2 = o.slot_bound_c2;
    cfg.coeff_degree = o.coeff_degree;
    Certificate cert = run_nogo(cfg);
    emit(o, json ? dump(to_json(cert)) : render_text(cert));
  } else if (cmd == "prop1") {
    int bound = o.level == 1 ? o.slot_bound_c1 : o.slot_bound_c2;
    Prop1Report rep = run_prop1(parse_hamiltonians(o.hamiltonians), o.level, bound, o.coeff_degree);
    emit(o, json ? dump(to_json(rep)) : render_text(rep));
  } else if (cmd == "moyal") {
    MoyalReport rep = run_moyal_controls(o.order, o.max_degree, parse_hamiltonians(o.hamiltonians));
    emit(o, json ? dump(to_json(rep)) : render_text(rep));
  } else if (cmd == "invariance") {
    int bound = o.level == 1 ? o.slot_bound_c1 : o.slot_bound_c2;
    BiDiffOp<UnknownExpr> op = build_ansatz(o.level, bound, o.coeff_degree);
    ConstraintSystem sys;
    for (const Poly& h : parse_hamiltonians(o.hamiltonians)) sys.append(invariance_rows(hamiltonian_vf(h), op, h.str()));
    emit(o, json ? dump(to_json(sys)) : sys.str());
  } else if (cmd == "check") {
    std::ifstream in(o.certificate, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + o.certificate);
    Json cert = Json::parse(in);
    ReplayResult r = check_certificate(cert);
    std::ostringstream os;
    for (const auto& line : r.log) os << line << "\n";
    for (const auto& line : r.errors) os << "error: " << line << "\n";
    os << (r.ok ? "VALID" : "INVALID") << " (" << r.seconds << " s)\n";
    emit(o, os.str());
    return r.ok ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant star product workbench"};
  app.require_subcommand(1);
  Options o;

  auto positive = CLI::Range(0, 64);
  auto common = [&](CLI::App* sub) {
    sub->add_option("--hamiltonians", o.hamiltonians, "comma-separated polynomials in x, y");
    sub->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--out", o.out, "write output to this file");
  };
  auto bounds = [&](CLI::App* sub, int min_bound) {
    sub->add_option("--slot-bound-c1", o.slot_bound_c1, "max derivative order per slot in C1")
        ->check(CLI::Range(min_bound, 64));
    sub->add_option("--slot-bound-c2", o.slot_bound_c2, "max derivative order per slot in C2")
        ->check(CLI::Range(min_bound, 64));
    sub->add_option("--coeff-degree", o.coeff_degree, "max coefficient degree")->check(positive);
  };

  CLI::App* nogo = app.add_subcommand("nogo", "derive the no-go certificate");
  common(nogo);
  bounds(nogo, 2);
  CLI::App* prop1 = app.add_subcommand("prop1", "compare invariance rows with the closed-form relations");
  common(prop1);
  bounds(prop1, 0);
  prop1->add_option("--level", o.level, "operator level")->check(CLI::Range(1, 16));
  CLI::App* moyal = app.add_subcommand("moyal", "Moyal associativity and invariance controls");
  common(moyal);
  moyal->add_option("--order", o.order, "highest order in hbar")->check(CLI::Range(1, 16));
  moyal->add_option("--max-degree", o.max_degree, "max monomial degree")->check(CLI::Range(0, 32));
  CLI::App* inv = app.add_subcommand("invariance", "dump invariance constraint rows");
  common(inv);
  bounds(inv, 0);
  inv->add_option("--level", o.level, "operator level")->check(CLI::Range(1, 16));
  CLI::App* check = app.add_subcommand("check", "replay a JSON certificate");
  check->add_option("certificate", o.certificate, "certificate file")->required();
  check->add_option("--out", o.out, "write output to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    return run(app.get_subcommands().front()->get_name(), o);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
