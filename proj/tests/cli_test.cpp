//------------------------------------------------------------------------------
//
//   Copyright 2026 The imbalance Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "cli.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace imbalance::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome
{
  int         code = 0;
  std::string out;
  std::string err;
};

Outcome RunCli(std::vector<std::string> args)
{
  args.insert(args.begin(), "imbalance");
  std::ostringstream out;
  std::ostringstream err;
  int const          code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
           ("imbalance_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    unsetenv("IMBALANCE_MAX_DOM");
  }

  void TearDown() override
  {
    fs::remove_all(dir_);
    unsetenv("IMBALANCE_MAX_DOM");
  }

  std::string Write(std::string const &name, std::string const &content)
  {
    fs::path const path = dir_ / name;
    std::ofstream(path) << content;
    return path.string();
  }

  std::string Path(std::string const &name) const
  {
    return (dir_ / name).string();
  }

  static std::string Slurp(std::string const &path)
  {
    std::ifstream      in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, Eval)
{
  auto const bids = Write("b.json", R"({"bids":{"1":"1","2":"2","3":"4"}})");
  auto const sp   = RunCli({"eval", "--rule", "second-price", "--bids", bids});
  EXPECT_EQ(sp.code, kOk);
  EXPECT_EQ(sp.out, "2\n");

  auto const seven = RunCli({"eval", "--rule", "constant:7", "--bids", bids});
  EXPECT_EQ(seven.code, kOk);
  EXPECT_EQ(seven.out, "7\n");

  auto const single = RunCli({"eval", "--rule", "second-price", "--bids", Write("s.json", R"({"bids":{"1":"5"}})")});
  EXPECT_EQ(single.code, kUsage);
  EXPECT_NE(single.err.find("rule undefined on this arity"), std::string::npos) << single.err;

  EXPECT_EQ(RunCli({"eval", "--rule", "bogus", "--bids", bids}).code, kUsage);
  EXPECT_EQ(RunCli({"eval", "--rule", "first-price", "--bids", Write("bad.json", "{not json")}).code, kUsage);
  EXPECT_EQ(RunCli({"eval", "--rule", "first-price", "--bids", Path("missing.json")}).code, kUsage);
}

TEST_F(CliTest, Theorem)
{
  auto const one = RunCli({"theorem", "--n", "1"});
  EXPECT_EQ(one.code, kOk);
  EXPECT_EQ(one.out, "HOLDS lhs=4/3 rhs=2/3\n");

  auto const four = RunCli({"theorem", "--n", "4"});
  EXPECT_EQ(four.code, kOk);
  EXPECT_EQ(four.out, "HOLDS lhs=5/3 rhs=5/6\n");

  EXPECT_EQ(RunCli({"theorem", "--n", "0"}).code, kUsage);
  EXPECT_EQ(RunCli({"theorem"}).code, kUsage);
  EXPECT_EQ(RunCli({"theorem", "--n", "x"}).code, kUsage);

  auto const flat = RunCli({"theorem", "--n", "1", "--rule", "constant:0", "--g", "constant:0"});
  EXPECT_EQ(flat.code, kFinding);
  EXPECT_EQ(flat.out, "HYPOTHESES NOT MET\n");
}

TEST_F(CliTest, TheoremReportAndTrace)
{
  auto const report = Path("report.json");
  auto const run    = RunCli({"theorem", "--n", "2", "--trace", "--out", report});
  EXPECT_EQ(run.code, kOk);
  EXPECT_NE(run.out.find("[pass] counterexample"), std::string::npos);
  EXPECT_NE(run.out.find("k_0 = 1/4"), std::string::npos) << run.out;
  EXPECT_NE(run.out.find("k_2 = 1/4"), std::string::npos) << run.out;

  auto const doc = json::Json::parse(Slurp(report));
  EXPECT_EQ(doc.at("lhs"), "3/2");
  EXPECT_EQ(doc.at("rhs"), "3/4");
  EXPECT_EQ(doc.at("holds"), true);
}

TEST_F(CliTest, WitnessAndCheckBalance)
{
  auto const witness = Path("x.json");
  ASSERT_EQ(RunCli({"witness", "--n", "1", "--out", witness}).code, kOk);
  EXPECT_EQ(json::BidVectorSetFromJson(json::Json::parse(Slurp(witness))), VickreyWitnessSet(1));

  auto const cert   = Path("cert.json");
  auto const refute = RunCli({"check-balance", "--witness", witness, "--rule", "neg-second-price", "--out", cert});
  EXPECT_EQ(refute.code, kFinding);
  EXPECT_EQ(refute.out.rfind("INFEASIBLE", 0), 0U);
  EXPECT_NE(refute.out.find("certificate=verified"), std::string::npos);

  auto const system = BuildBalanceSystem(VickreyWitnessSet(1), rules::NegSecondPrice());
  EXPECT_TRUE(VerifyCertificate(system, json::CertificateFromJson(json::Json::parse(Slurp(cert)))));

  auto const zero = RunCli({"check-balance", "--witness", witness, "--rule", "constant:0"});
  EXPECT_EQ(zero.code, kOk);
  EXPECT_EQ(zero.out.rfind("FEASIBLE", 0), 0U);

  EXPECT_EQ(RunCli({"check-balance", "--witness", Write("bad.json", R"({"vectors":5})"), "--rule", "constant:0"}).code,
            kUsage);
}

TEST_F(CliTest, SystemRoundTripThroughFiles)
{
  auto const witness = Path("x.json");
  ASSERT_EQ(RunCli({"witness", "--n", "2", "--out", witness}).code, kOk);
  auto const system = Path("s.json");
  auto const direct =
      RunCli({"check-balance", "--witness", witness, "--rule", "neg-second-price", "--system-out", system});
  auto const again = RunCli({"solve-system", "--system", system});
  EXPECT_EQ(direct.code, kFinding);
  EXPECT_EQ(again.code, kFinding);
  EXPECT_EQ(direct.out, again.out);
}

TEST_F(CliTest, SolveSystemOneRow)
{
  auto const file = Write("one.json", R"({"variables":[["4","4"]],"rows":[{"coeffs":{"0":"3"},"rhs":"-4"}]})");
  auto const run  = RunCli({"solve-system", "--system", file});
  EXPECT_EQ(run.code, kOk);
  EXPECT_EQ(run.out.rfind("FEASIBLE rows=1 variables=1\n", 0), 0U) << run.out;
  EXPECT_NE(run.out.find("\"-4/3\""), std::string::npos) << run.out;

  auto const bad = Write("bad.json", R"({"variables":[],"rows":[{"coeffs":{"0":"1"},"rhs":"1"}]})");
  EXPECT_EQ(RunCli({"solve-system", "--system", bad}).code, kUsage);
}

TEST_F(CliTest, DomainCap)
{
  EXPECT_EQ(RunCli({"witness", "--n", "8"}).code, kOk);
  EXPECT_EQ(RunCli({"witness", "--n", "9"}).code, kUsage);

  setenv("IMBALANCE_MAX_DOM", "3", 1);
  EXPECT_EQ(RunCli({"theorem", "--n", "1"}).code, kOk);
  auto const capped = RunCli({"theorem", "--n", "2"});
  EXPECT_EQ(capped.code, kUsage);
  EXPECT_NE(capped.err.find("IMBALANCE_MAX_DOM"), std::string::npos);
  auto const bids = Write("b.json", R"({"bids":{"1":"1","2":"2","3":"3","4":"4"}})");
  EXPECT_EQ(RunCli({"eval", "--rule", "first-price", "--bids", bids}).code, kUsage);

  setenv("IMBALANCE_MAX_DOM", "lots", 1);
  EXPECT_EQ(RunCli({"theorem", "--n", "1"}).code, kUsage);
}

TEST_F(CliTest, UsageErrors)
{
  EXPECT_EQ(RunCli({}).code, kUsage);
  EXPECT_EQ(RunCli({"frobnicate"}).code, kUsage);
  EXPECT_EQ(RunCli({"eval", "--rule", "first-price"}).code, kUsage);
  EXPECT_EQ(RunCli({"--help"}).code, kOk);
}

TEST_F(CliTest, DeterministicOutput)
{
  auto const a = RunCli({"witness", "--n", "3"});
  auto const b = RunCli({"witness", "--n", "3"});
  EXPECT_EQ(a.out, b.out);

  auto const witness = Write("x.json", a.out);
  auto const c       = RunCli({"check-balance", "--witness", witness, "--rule", "neg-second-price"});
  auto const d       = RunCli({"check-balance", "--witness", witness, "--rule", "neg-second-price"});
  EXPECT_EQ(c.out, d.out);
}

std::pair<int, std::string> Spawn(std::string const &command)
{
  std::FILE *pipe = popen(command.c_str(), "r");
  if (pipe == nullptr)
  {
    return {-1, ""};
  }
  std::string            out;
  std::array<char, 4096> buffer{};
  while (std::fgets(buffer.data(), static_cast<int>(buffer.size()), pipe) != nullptr)
  {
    out += buffer.data();
  }
  int const status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

TEST_F(CliTest, ExecutableExitCodes)
{
  std::string const exe = IMBALANCE_CLI_PATH;
  auto const        ok  = Spawn(exe + " theorem --n 1");
  EXPECT_EQ(ok.first, kOk);
  EXPECT_EQ(ok.second, "HOLDS lhs=4/3 rhs=2/3\n");
  EXPECT_EQ(Spawn(exe + " theorem --n 0 2>/dev/null").first, kUsage);

  auto const witness = Path("x.json");
  EXPECT_EQ(Spawn(exe + " witness --n 1 --out " + witness).first, kOk);
  EXPECT_EQ(Spawn(exe + " check-balance --witness " + witness + " --rule neg-second-price").first, kFinding);
  EXPECT_EQ(Spawn(exe + " check-balance --witness " + witness + " --rule constant:0").first, kOk);
}

}  // namespace
}  // namespace imbalance::cli
