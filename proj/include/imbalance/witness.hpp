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

#include "imbalance/bids.hpp"
#include "imbalance/error.hpp"
#include "imbalance/payment.hpp"
#include "imbalance/price_rule.hpp"
#include "imbalance/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace imbalance {

/// Which of the two rules a bidder is tagged with.
enum class RuleTag
{
  F,
  G
};

/// (low, high, tags) together with the auxiliary rule `g` tagged by G.
struct CounterexampleTriple
{
  BidVector                   low;
  BidVector                   high;
  std::map<BidderId, RuleTag> tags;
  PriceRule                   g;
};

namespace detail {

inline Rational EvalTagged(CounterexampleTriple const &t, PriceRule const &f, BidderId i, BidVector const &b)
{
  return t.tags.at(i) == RuleTag::F ? f(b) : t.g(b);
}

inline bool AnyTagged(CounterexampleTriple const &t, RuleTag tag)
{
  return std::any_of(t.tags.begin(), t.tags.end(), [tag](auto const &e) { return e.second == tag; });
}

}  // namespace detail

/**
 * True iff the two vectors share a domain, the tags cover that domain, and
 * exactly one of `f(high) - f(low)` and `g(high) - g(low)` is zero.
 */
inline bool IsCounterexample(CounterexampleTriple const &t, PriceRule const &f)
{
  IdSet const ids = t.low.Domain();
  if (ids != t.high.Domain() || t.tags.size() != ids.size())
  {
    return false;
  }
  for (auto const &entry : t.tags)
  {
    if (ids.count(entry.first) == 0)
    {
      return false;
    }
  }
  try
  {
    bool const f_moves = f(t.high) != f(t.low);
    bool const g_moves = t.g(t.high) != t.g(t.low);
    return f_moves != g_moves;
  }
  catch (Error const &)
  {
    return false;
  }
}

struct ImbalanceInequality
{
  Rational lhs;
  Rational rhs;
  bool     differs = false;
};

/**
 * Evaluates both sides of
 *
 *     f(low)  - (1/n) sum_i h(i)(low)   vs   f(high) - (1/n) sum_i h(i)(high)
 *
 * for a counterexample triple with 2 <= n = |dom low|. The tags must select
 * `g` for at least one bidder: if every tag is F both sides are zero.
 */
inline ImbalanceInequality CheckImbalanceInequality(CounterexampleTriple const &t, PriceRule const &f)
{
  if (!IsCounterexample(t, f))
  {
    throw PreconditionError("triple is not a counterexample for " + f.name());
  }
  if (t.low.size() < 2)
  {
    throw PreconditionError("counterexample needs at least two bidders");
  }
  if (!detail::AnyTagged(t, RuleTag::G))
  {
    throw PreconditionError("tags never select g");
  }

  Rational const n{t.low.size()};
  auto side = [&](BidVector const &b) {
    Rational tagged;
    for (auto const &entry : b)
    {
      tagged += detail::EvalTagged(t, f, entry.first, b);
    }
    return f(b) - tagged / n;
  };
  ImbalanceInequality out{side(t.low), side(t.high), false};
  out.differs = out.lhs != out.rhs;
  return out;
}

/// Bidders 1..n+2 with bids (1, ..., n, n+1, n+3) and (1, ..., n, n+2, n+3).
inline std::pair<BidVector, BidVector> VickreyVectors(std::uint64_t n)
{
  if (n < 1)
  {
    throw PreconditionError("n must be at least 1");
  }
  BidVector low;
  BidVector high;
  for (std::uint64_t i = 1; i <= n; ++i)
  {
    low.Insert(BidderId{i}, Rational(i));
    high.Insert(BidderId{i}, Rational(i));
  }
  low.Insert(BidderId{n + 1}, Rational(n + 1));
  high.Insert(BidderId{n + 1}, Rational(n + 2));
  low.Insert(BidderId{n + 2}, Rational(n + 3));
  high.Insert(BidderId{n + 2}, Rational(n + 3));
  return {std::move(low), std::move(high)};
}

/**
 * Default partner choice for second-price style rules: every bidder pairs
 * with the top bidder, and the top bidder pairs with the runner-up. Ties go
 * to the smaller id.
 */
inline std::map<BidderId, BidderId> VickreySelectors(BidVector const &b)
{
  if (b.size() < 2)
  {
    throw PreconditionError("selectors need at least two bidders");
  }
  auto by_bid = [](auto const &x, auto const &y) { return x.second < y.second; };
  // max_element returns the first maximum, i.e. the smallest id on ties.
  auto const top = std::max_element(b.begin(), b.end(), by_bid)->first;
  BidVector const rest = Remove(b, top);
  auto const runner_up = std::max_element(rest.begin(), rest.end(), by_bid)->first;

  std::map<BidderId, BidderId> selectors;
  for (auto const &entry : b)
  {
    selectors.emplace(entry.first, entry.first == top ? runner_up : top);
  }
  return selectors;
}

/// The second-price counterexample: f = -second price, g = -first price,
/// tag F on the top bidder and G on everyone else.
inline CounterexampleTriple VickreyTriple(std::uint64_t n)
{
  auto [low, high] = VickreyVectors(n);
  std::map<BidderId, RuleTag> tags;
  for (auto const &entry : low)
  {
    tags.emplace(entry.first, entry.first.value == n + 2 ? RuleTag::F : RuleTag::G);
  }
  return {std::move(low), std::move(high), std::move(tags), rules::NegFirstPrice()};
}

/**
 * The finite set of bid vectors on which imposing balance for the
 * second-price rule is already contradictory. For each of the two vectors
 * b with middle bid `mid` (n+1 for low, n+2 for high):
 *
 *  - for every j with b(j) = n+3 and every other i:
 *      ({i, j} x {n+3}) ⇀ C(b - {i, j}, n+3)
 *  - (b^-1{mid, n+3} x {mid}) ⇀ C(b - b^-1{mid, n+3}, mid)
 *
 * where C is the canonical full family; both vectors themselves are added.
 */
inline BidVectorSet VickreyWitnessSet(std::uint64_t n)
{
  auto const [low, high] = VickreyVectors(n);
  Rational const top_bid(n + 3);

  BidVectorSet witness;
  auto add_all = [&witness](BidVectorSet const &part) { witness.insert(part.begin(), part.end()); };

  auto add_for = [&](BidVector const &b, Rational const &mid) {
    for (auto j : Preimage(b, {top_bid}))
    {
      for (auto const &entry : b)
      {
        BidderId const i = entry.first;
        if (i == j)
        {
          continue;
        }
        IdSet const pair{i, j};
        add_all(Extend(Flat(pair, top_bid), MakeFullFamily(Remove(b, pair), top_bid).Members()));
      }
    }
    IdSet const upper = Preimage(b, {mid, top_bid});
    add_all(Extend(Flat(upper, mid), MakeFullFamily(Remove(b, upper), mid).Members()));
  };

  add_for(low, Rational(n + 1));
  add_for(high, Rational(n + 2));
  witness.insert(low);
  witness.insert(high);
  return witness;
}

struct HypothesisEntry
{
  std::string name;
  bool        pass = false;
  std::string detail;
};

/**
 * Result of checking the imbalance theorem on one triple.
 *
 * `lhs`, `rhs` and `holds` are set only when every logged hypothesis passes;
 * in that case `holds` is `lhs != rhs`.
 */
struct TheoremReport
{
  std::optional<Rational>      lhs;
  std::optional<Rational>      rhs;
  std::optional<bool>          holds;
  std::map<BidderId, Rational> eta_low;
  std::map<BidderId, Rational> eta_high;
  BidVectorSet                 witness_set;
  std::vector<HypothesisEntry> hypotheses;

  bool HypothesesMet() const
  {
    return std::all_of(hypotheses.begin(), hypotheses.end(), [](auto const &h) { return h.pass; });
  }
};

/**
 * Checks every hypothesis of the imbalance theorem for `f` on `t`, logging
 * each one, and when all pass evaluates
 *
 *     f(low) - sum_i P(bag(low - i))   vs   f(high) - sum_i P(bag(high - i))
 *
 * with the payments forced by the adequate sets. Failures are recorded, not
 * thrown.
 */
inline TheoremReport VerifyImbalanceTheorem(PriceRule const &f, CounterexampleTriple const &t,
                                            std::map<BidderId, BidderId> const &low_selectors,
                                            std::map<BidderId, BidderId> const &high_selectors)
{
  TheoremReport report;
  auto log = [&report](std::string name, bool pass, std::string detail) {
    report.hypotheses.push_back({std::move(name), pass, std::move(detail)});
  };

  bool const counterexample = IsCounterexample(t, f);
  log("counterexample", counterexample,
      counterexample ? "exactly one of f, g changes between the two vectors"
                     : "domains, tags or rule differences do not form a counterexample");
  log("arity", t.low.size() >= 2, "|dom| = " + std::to_string(t.low.size()));
  bool const uses_g = detail::AnyTagged(t, RuleTag::G);
  log("tags select g", uses_g, uses_g ? "some bidder is tagged G" : "every bidder is tagged F");

  auto check_side = [&](std::string const &side, BidVector const &b,
                        std::map<BidderId, BidderId> const &selectors) {
    IdSet const ids = b.Domain();
    for (auto const &[i, bid] : b)
    {
      std::string const who = side + " i=" + std::to_string(i.value);
      auto it               = selectors.find(i);
      bool const valid      = it != selectors.end() && it->second != i && b.contains(it->second);
      log("partner " + who, valid,
          valid ? "j=" + std::to_string(it->second.value) : std::string("no partner in dom \\ {i}"));
      if (!valid)
      {
        continue;
      }
      BidderId const  j    = it->second;
      Rational const &fill = b.at(j);
      BidVector const base = Remove(b, IdSet{i, j});
      try
      {
        auto const set   = BuildAdequateSet(base, fill, f, i, j);
        auto const check = CheckAdequacy(set.members, base, fill, f, i, j);
        log("adequate " + who, static_cast<bool>(check),
            check ? std::to_string(set.members.size()) + " vectors" : check.detail);
        report.witness_set.insert(set.members.begin(), set.members.end());
      }
      catch (Error const &e)
      {
        log("adequate " + who, false, e.what());
      }
      try
      {
        Rational const eta      = f(Flat(ids, fill));
        auto           tag      = t.tags.find(i);
        if (tag == t.tags.end())
        {
          log("eta " + who, false, "bidder has no tag");
          continue;
        }
        Rational const tagged = tag->second == RuleTag::F ? f(b) : t.g(b);
        log("eta " + who, eta == tagged,
            "eta=" + eta.ToString() + " h(i)=" + (tag->second == RuleTag::F ? "f" : "g") + " gives " +
                tagged.ToString());
      }
      catch (Error const &e)
      {
        log("eta " + who, false, e.what());
      }
    }
  };
  check_side("low", t.low, low_selectors);
  check_side("high", t.high, high_selectors);

  if (!report.HypothesesMet())
  {
    return report;
  }
  auto const low_sum  = BalancedPaymentSum(t.low, f, low_selectors);
  auto const high_sum = BalancedPaymentSum(t.high, f, high_selectors);
  report.eta_low      = low_sum.eta;
  report.eta_high     = high_sum.eta;
  report.lhs          = f(t.low) - low_sum.sum;
  report.rhs          = f(t.high) - high_sum.sum;
  report.holds        = *report.lhs != *report.rhs;
  return report;
}

/// The theorem on the second-price instance with default partners.
inline TheoremReport VerifyVickreyInstance(std::uint64_t n)
{
  auto const t = VickreyTriple(n);
  return VerifyImbalanceTheorem(rules::NegSecondPrice(), t, VickreySelectors(t.low), VickreySelectors(t.high));
}

}  // namespace imbalance
