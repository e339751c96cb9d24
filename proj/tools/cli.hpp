#pragma once
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

#include "imbalance/imbalance.hpp"
#include "imbalance/json_io.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace imbalance::cli {

// Exit codes shared by every subcommand.
constexpr int kOk       = 0;
constexpr int kInternal = 1;
constexpr int kUsage    = 2;
constexpr int kFinding  = 3;

/// Upper bound on |dom b| for any vector the tool reads or builds.
inline std::size_t MaxDomain()
{
  char const *raw = std::getenv("IMBALANCE_MAX_DOM");
  if (raw == nullptr || *raw == '\0')
  {
    return 10;
  }
  try
  {
    return static_cast<std::size_t>(std::stoul(raw));
  }
  catch (std::exception const &)
  {
    throw Error(std::string("IMBALANCE_MAX_DOM is not a number: ") + raw);
  }
}

inline void RequireDomainWithinCap(std::size_t size)
{
  std::size_t const cap = MaxDomain();
  if (size > cap)
  {
    throw Error("bid vector with " + std::to_string(size) + " bidders exceeds IMBALANCE_MAX_DOM=" +
                std::to_string(cap));
  }
}

inline json::Json ReadJsonFile(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error("cannot open " + path);
  }
  return json::Json::parse(in);
}

inline void WriteJson(json::Json const &doc, std::optional<std::string> const &path, std::ostream &out)
{
  if (path)
  {
    std::ofstream file(*path);
    if (!file)
    {
      throw Error("cannot write " + *path);
    }
    file << doc.dump(2) << '\n';
  }
  else
  {
    out << doc.dump(2) << '\n';
  }
}

struct Options
{
  std::string                rule = "neg-second-price";
  std::string                g    = "neg-first-price";
  std::string                bids;
  std::string                witness;
  std::string                system;
  std::optional<std::string> out;
  std::optional<std::string> system_out;
  std::int64_t               n     = 0;
  bool                       trace = false;
};

inline int RunEval(Options const &opt, std::ostream &out)
{
  PriceRule const rule = RuleFromName(opt.rule);
  BidVector const b    = json::BidVectorFromJson(ReadJsonFile(opt.bids));
  RequireDomainWithinCap(b.size());
  out << rule(b) << '\n';
  return kOk;
}

inline std::uint64_t CheckedN(Options const &opt)
{
  if (opt.n < 1)
  {
    throw PreconditionError("--n must be at least 1");
  }
  auto const n = static_cast<std::uint64_t>(opt.n);
  RequireDomainWithinCap(n + 2);
  return n;
}

inline int RunWitness(Options const &opt, std::ostream &out)
{
  std::uint64_t const n = CheckedN(opt);
  WriteJson(json::ToJson(VickreyWitnessSet(n)), opt.out, out);
  return kOk;
}

inline void PrintIterationTrace(PriceRule const &rule, std::uint64_t n, std::ostream &out)
{
  std::vector<Rational> extras;
  for (std::uint64_t v = 1; v <= n; ++v)
  {
    extras.emplace_back(v);
  }
  try
  {
    auto const result = IterateTable(n + 2, Rational(n + 3), extras, rule);
    for (auto const &step : result.trace.steps)
    {
      out << "k_" << step.extras << " = " << step.coefficient << " @ " << ToString(step.shape) << '\n';
    }
  }
  catch (Error const &e)
  {
    out << "trace stopped: " << e.what() << '\n';
  }
}

inline int RunTheorem(Options const &opt, std::ostream &out)
{
  std::uint64_t const n = CheckedN(opt);
  PriceRule const     f = RuleFromName(opt.rule);

  auto triple = VickreyTriple(n);
  triple.g    = RuleFromName(opt.g);
  auto const report =
      VerifyImbalanceTheorem(f, triple, VickreySelectors(triple.low), VickreySelectors(triple.high));

  if (opt.trace)
  {
    for (auto const &h : report.hypotheses)
    {
      out << (h.pass ? "[pass] " : "[FAIL] ") << h.name << ": " << h.detail << '\n';
    }
    PrintIterationTrace(f, n, out);
  }
  if (opt.out)
  {
    WriteJson(json::ToJson(report), opt.out, out);
  }

  if (!report.HypothesesMet())
  {
    out << "HYPOTHESES NOT MET\n";
    return kFinding;
  }
  if (!*report.holds)
  {
    out << "EQUAL lhs=" << *report.lhs << " rhs=" << *report.rhs << '\n';
    return kInternal;
  }
  out << "HOLDS lhs=" << *report.lhs << " rhs=" << *report.rhs << '\n';
  return kOk;
}

inline int ReportSolution(LinearSystem const &system, Options const &opt, std::ostream &out)
{
  std::string const shape =
      " rows=" + std::to_string(system.rows.size()) + " variables=" + std::to_string(system.variables.size());
  auto const result = SolveOrRefute(system);
  if (auto const *feasible = std::get_if<Feasible>(&result))
  {
    out << "FEASIBLE" << shape << '\n';
    WriteJson(json::ToJson(feasible->assignment), opt.out, out);
    return kOk;
  }
  auto const &cert = std::get<Infeasible>(result).certificate;
  if (!VerifyCertificate(system, cert))
  {
    out << "INFEASIBLE" << shape << " certificate=rejected\n";
    return kInternal;
  }
  out << "INFEASIBLE" << shape << " certificate=verified\n";
  WriteJson(json::ToJson(cert), opt.out, out);
  return kFinding;
}

inline int RunCheckBalance(Options const &opt, std::ostream &out)
{
  PriceRule const    rule    = RuleFromName(opt.rule);
  BidVectorSet const vectors = json::BidVectorSetFromJson(ReadJsonFile(opt.witness));
  for (auto const &b : vectors)
  {
    RequireDomainWithinCap(b.size());
  }
  LinearSystem const system = BuildBalanceSystem(vectors, rule);
  if (opt.system_out)
  {
    WriteJson(json::ToJson(system), opt.system_out, out);
  }
  return ReportSolution(system, opt, out);
}

inline int RunSolveSystem(Options const &opt, std::ostream &out)
{
  return ReportSolution(json::LinearSystemFromJson(ReadJsonFile(opt.system)), opt, out);
}

/// Entry point shared by the executable and the tests. `args[0]` is the
/// program name.
inline int Run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Budget-imbalance verification for symmetric auction payment rules", "imbalance"};
  app.require_subcommand(1);
  Options opt;

  auto *eval = app.add_subcommand("eval", "Evaluate a price rule on a bid vector");
  eval->add_option("--rule", opt.rule, "Rule name, e.g. second-price or constant:-3/2")->required();
  eval->add_option("--bids", opt.bids, "Bid vector JSON file")->required();

  auto *witness = app.add_subcommand("witness", "Write the second-price witness set");
  witness->add_option("--n", opt.n, "Instance size (n >= 1)")->required();
  witness->add_option("--out", opt.out, "Output file (default: stdout)");

  auto *theorem = app.add_subcommand("theorem", "Verify the imbalance theorem on the second-price instance");
  theorem->add_option("--n", opt.n, "Instance size (n >= 1)")->required();
  theorem->add_option("--rule", opt.rule, "Rule f")->capture_default_str();
  theorem->add_option("--g", opt.g, "Auxiliary rule g")->capture_default_str();
  theorem->add_option("--out", opt.out, "Write the report JSON here");
  theorem->add_flag("--trace", opt.trace, "Print the hypothesis log and elimination trace");

  auto *check = app.add_subcommand("check-balance", "Decide whether balance is satisfiable on a witness set");
  check->add_option("--witness", opt.witness, "Witness set JSON file")->required();
  check->add_option("--rule", opt.rule, "Rule f")->required();
  check->add_option("--out", opt.out, "Write the table or certificate here");
  check->add_option("--system-out", opt.system_out, "Also write the linear system JSON here");

  auto *solve = app.add_subcommand("solve-system", "Solve or refute a linear system file");
  solve->add_option("--system", opt.system, "Linear system JSON file")->required();
  solve->add_option("--out", opt.out, "Write the table or certificate here");

  std::vector<char const *> argv;
  argv.reserve(args.size());
  for (auto const &a : args)
  {
    argv.push_back(a.c_str());
  }
  try
  {
    app.parse(static_cast<int>(argv.size()), argv.data());
  }
  catch (CLI::ParseError const &e)
  {
    int const code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try
  {
    if (eval->parsed())
    {
      return RunEval(opt, out);
    }
    if (witness->parsed())
    {
      return RunWitness(opt, out);
    }
    if (theorem->parsed())
    {
      return RunTheorem(opt, out);
    }
    if (check->parsed())
    {
      return RunCheckBalance(opt, out);
    }
    return RunSolveSystem(opt, out);
  }
  catch (Error const &e)
  {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  catch (nlohmann::json::exception const &e)
  {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace imbalance::cli
