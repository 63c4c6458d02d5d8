#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun invstar(const std::string& args) {
  std::string cmd = std::string(INVSTAR_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  CliRun r{-1, ""};
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("invstar_cli_" + name)).string();
}

}  // namespace

TEST(Cli, NogoJson) {
  CliRun r = invstar("nogo --format json");
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("status"), "INFEASIBLE");
  EXPECT_EQ(j.at("schema"), 1);
}

TEST(Cli, NogoTextAndUndecidedExitZero) {
  CliRun r = invstar("nogo --hamiltonians 1,x,y --slot-bound-c1 2 --slot-bound-c2 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("status: FEASIBLE-UNDECIDED"), std::string::npos);
}

TEST(Cli, CertificateFileReplays) {
  std::string path = temp_path("cert.json");
  ASSERT_EQ(invstar("nogo --format json --out " + path).code, 0);
  CliRun r = invstar("check " + path);
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("VALID"), std::string::npos);

  std::ifstream in(path);
  auto j = nlohmann::json::parse(in);
  j["status"] = "FEASIBLE-UNDECIDED";
  std::ofstream(path) << j.dump();
  CliRun bad = invstar("check " + path);
  EXPECT_NE(bad.code, 0);
  EXPECT_NE(bad.out.find("INVALID"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, InvarianceUnderConstantFields) {
  CliRun r = invstar("invariance --hamiltonians x,y --level 1 --slot-bound-c1 2");
  ASSERT_EQ(r.code, 0) << r.out;
  std::size_t lines = 0, pos = 0;
  while ((pos = r.out.find('\n', pos)) != std::string::npos) ++lines, ++pos;
  EXPECT_GT(lines, 0u);
  std::size_t start = 0;
  for (std::size_t k = 0; k < lines; ++k) {
    std::size_t end = r.out.find('\n', start);
    std::string line = r.out.substr(start, end - start);
    start = end + 1;
    std::string expr = line.substr(line.rfind(" | ") + 3);
    EXPECT_NE(expr.find('@'), std::string::npos) << line;
    EXPECT_EQ(expr.find(" + "), std::string::npos) << line;
    EXPECT_EQ(expr.find(" - "), std::string::npos) << line;
  }
}

TEST(Cli, InvarianceJson) {
  CliRun r = invstar("invariance --hamiltonians x^2 --slot-bound-c1 2 --coeff-degree 0 --format json");
  ASSERT_EQ(r.code, 0);
  auto rows = nlohmann::json::parse(r.out);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0].at("provenance").at("source"), "x^2");
}

TEST(Cli, Prop1) {
  CliRun r = invstar("prop1 --level 1 --slot-bound-c1 4 --coeff-degree 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\nEQUIVALENT\n"), std::string::npos) << r.out;
  CliRun j = invstar("prop1 --slot-bound-c1 0 --coeff-degree 0 --format json");
  auto rep = nlohmann::json::parse(j.out);
  EXPECT_EQ(rep.at("unknowns"), 1);
  EXPECT_EQ(rep.at("verdict"), "EQUIVALENT");
}

TEST(Cli, Moyal) {
  CliRun r = invstar("moyal --order 2 --max-degree 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(", 0 failures"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("C2 under H = x^3: NOT invariant"), std::string::npos);
}

TEST(Cli, ParseErrorsReportPosition) {
  CliRun r = invstar("nogo --hamiltonians x^3,x^");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("parse error at position 6"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_NE(invstar("nogo --slot-bound-c1 1").code, 0);
  EXPECT_NE(invstar("nogo --format xml").code, 0);
  EXPECT_NE(invstar("frobnicate").code, 0);
  EXPECT_NE(invstar("").code, 0);
  EXPECT_NE(invstar("check /nonexistent/cert.json").code, 0);
}
