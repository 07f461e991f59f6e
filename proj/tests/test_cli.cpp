#include "support.hpp"

#include "qjacobi/cli.hpp"
#include "qjacobi/liealg.hpp"
#include "qjacobi/psi.hpp"
#include "qjacobi/transport.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <sstream>

using namespace qjacobi;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string run_binary(const std::string &args) {
  std::string cmd = std::string(QJACOBI_EXE) + " " + args + " 2>/dev/null";
  std::FILE *p = popen(cmd.c_str(), "r");
  if (!p)
    return {};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0)
    out.append(buf.data(), n);
  pclose(p);
  return out;
}

const char *kPsi3 = "Psi:\n"
                    "h^0: 1\n"
                    "h^1: 0\n"
                    "h^2: - 1/24*O12.O23 + 1/24*O23.O12\n"
                    "Psi^-1:\n"
                    "h^0: 1\n"
                    "h^1: 0\n"
                    "h^2: 1/24*O12.O23 - 1/24*O23.O12\n";

} // namespace

TEST(CliPsi, OrderTwoAndThree) {
  CliRun r2 = run({"psi", "--order", "2"});
  EXPECT_EQ(r2.code, kExitOk);
  EXPECT_EQ(r2.out, "Psi:\nh^0: 1\nh^1: 0\nPsi^-1:\nh^0: 1\nh^1: 0\n");
  CliRun r3 = run({"psi", "-n", "3"});
  EXPECT_EQ(r3.code, kExitOk);
  EXPECT_EQ(r3.out, kPsi3);
  EXPECT_TRUE(r3.err.empty());
}

TEST(CliPsi, NoticesGoToStderr) {
  CliRun r = run({"psi", "--order", "4"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.err.find("notice: no E_3"), std::string::npos);
  EXPECT_EQ(r.out.find("notice"), std::string::npos);
  CliRun g = run({"psi", "--order", "4", "--golden"});
  EXPECT_TRUE(g.err.empty());
  EXPECT_EQ(g.out, r.out);
}

TEST(CliPsi, Json) {
  CliRun r = run({"psi", "--order", "3", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk);
  nlohmann::json j = nlohmann::json::parse(r.out);
  PolySeries psi = series_from_json(j["psi"]);
  EXPECT_EQ(psi, compute_psi(builtin_table(), 3).psi);
}

TEST(CliPsi, GoldenFiles) {
  for (int n : {3, 6}) {
    const std::string path = std::string(QJACOBI_GOLDEN_DIR) + "/psi_builtin_n" + std::to_string(n) + ".txt";
    CliRun r = run({"psi", "--order", std::to_string(n), "--golden"});
    EXPECT_EQ(r.out, qjt::read_file(path)) << path;
  }
}

TEST(CliPsi, OutFile) {
  const auto path = std::filesystem::temp_directory_path() / "qjacobi_cli_psi.txt";
  CliRun r = run({"psi", "--order", "3", "--out", path.string()});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(qjt::read_file(path.string()), kPsi3);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"psi", "--out", "/nonexistent/dir/file.txt"}).code, kExitInput);
}

TEST(CliExitCodes, Usage) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"psi", "--order", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"psi", "--order", "x"}).code, kExitUsage);
  EXPECT_EQ(run({"psi", "--format", "yaml"}).code, kExitUsage);
  EXPECT_EQ(run({"psi", "--golden", "--format", "json"}).code, kExitUsage);
  EXPECT_EQ(run({"verify"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", "everything"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", "transport", "--identity", "9.9"}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  CliRun help = run({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("psi"), std::string::npos);
}

TEST(CliExitCodes, Input) {
  EXPECT_EQ(run({"verify", "classical", "--algebra", QJACOBI_DATA_DIR "/algebras/abelian2.json"}).code, kExitInput);
  EXPECT_EQ(run({"verify", "classical", "--algebra", QJACOBI_TEST_DATA_DIR "/not_antisymmetric.json"}).code,
            kExitInput);
  EXPECT_EQ(run({"verify", "classical", "--algebra", "/nonexistent.json"}).code, kExitInput);
  CliRun bad = run({"psi", "--table", QJACOBI_TEST_DATA_DIR "/inhomogeneous_table.json"});
  EXPECT_EQ(bad.code, kExitInput);
  EXPECT_NE(bad.err.find("table error"), std::string::npos);
}

TEST(CliVerify, Suites) {
  CliRun c = run({"verify", "classical"});
  EXPECT_EQ(c.code, kExitOk);
  EXPECT_NE(c.out.find("overall: PASS"), std::string::npos);
  EXPECT_EQ(c.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(run({"verify", "rmatrix", "--order", "3"}).code, kExitOk);
  EXPECT_EQ(run({"verify", "classical", "--algebra", "sl3"}).code, kExitOk);
  CliRun a = run({"verify", "all", "--format", "json"});
  EXPECT_EQ(a.code, kExitOk);
  nlohmann::json j = nlohmann::json::parse(a.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["suites"].size(), 3u + transport::identity_ids().size());
}

TEST(CliVerify, SingleIdentity) {
  CliRun r = run({"verify", "transport", "--identity", "4.5"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("identity 4.5: PASS"), std::string::npos);
  EXPECT_NE(r.out.find("M^-1*X(s12.s23.s12)*N"), std::string::npos);
  EXPECT_NE(r.out.find("[braid]"), std::string::npos);
  EXPECT_EQ(r.out.find("identity 4.4"), std::string::npos);
}

TEST(CliVerify, ExternalTable) {
  CliRun r = run({"verify", "transport", "--identity", "5.1a", "--table", QJACOBI_TEST_DATA_DIR "/table_with_constants.json"});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
}

TEST(CliEval, OrderTwoIsIdentity) {
  CliRun r = run({"eval", "--algebra", "sl2", "--order", "2", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk);
  nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["psi"]["rows"], 27);
  EXPECT_TRUE(Matrix::from_json(j["psi"]["coeffs"][0]).is_identity());
  EXPECT_TRUE(Matrix::from_json(j["psi"]["coeffs"][1]).is_zero());
}

TEST(CliEval, OrderThreeMatchesLibrary) {
  CliRun r = run({"eval", "--order", "3", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk);
  nlohmann::json j = nlohmann::json::parse(r.out);
  TensorOps ops = build_tensor_ops(sl2());
  Matrix expected = (ops.Omega23 * ops.Omega12 - ops.Omega12 * ops.Omega23) * Scalar(Rational(1, 24));
  EXPECT_EQ(Matrix::from_json(j["psi"]["coeffs"][2]), expected);
  CliRun t = run({"eval", "--order", "3"});
  EXPECT_EQ(t.code, kExitOk);
  EXPECT_NE(t.out.find("h^2:"), std::string::npos);
}

TEST(CliTable, Validate) {
  CliRun ok = run({"table", "validate", QJACOBI_DATA_DIR "/tables/builtin.json"});
  EXPECT_EQ(ok.code, kExitOk);
  CliRun bad = run({"table", "validate", QJACOBI_TEST_DATA_DIR "/inhomogeneous_table.json", "--format", "json"});
  EXPECT_EQ(bad.code, kExitInput);
  EXPECT_FALSE(nlohmann::json::parse(bad.out)["ok"].get<bool>());
  CliRun gap = run({"table", "validate", QJACOBI_TEST_DATA_DIR "/gap_table.json", "--format", "json"});
  nlohmann::json g = nlohmann::json::parse(gap.out);
  EXPECT_EQ(g["missing"], nlohmann::json::array({2}));
}

TEST(CliOmega, Spectrum) {
  CliRun r = run({"omega"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("(x + 1)(x + 1/2)(x - 1/2)"), std::string::npos);
  CliRun j = run({"omega", "--algebra", "sl3", "--format", "json"});
  EXPECT_EQ(j.code, kExitOk);
  EXPECT_TRUE(nlohmann::json::parse(j.out)["spectrum"]["annihilates"].get<bool>());
}

TEST(CliDeterminism, RepeatedRuns) {
  EXPECT_EQ(run({"psi", "--order", "6"}).out, run({"psi", "--order", "6"}).out);
  EXPECT_EQ(run({"verify", "transport", "--format", "json"}).out, run({"verify", "transport", "--format", "json"}).out);
  const std::string a = run_binary("psi --order 5"), b = run_binary("psi --order 5");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, run({"psi", "--order", "5"}).out);
}
