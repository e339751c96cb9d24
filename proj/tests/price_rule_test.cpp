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

#include "imbalance/price_rule.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>

namespace imbalance {
namespace {

IdSet Ids(std::initializer_list<std::uint64_t> raw)
{
  IdSet ids;
  for (auto v : raw)
  {
    ids.insert(BidderId{v});
  }
  return ids;
}

TEST(SecondPriceTest, Examples)
{
  auto const rule = rules::SecondPrice();
  EXPECT_EQ(rule(BidVector{{1, 1}, {2, 2}, {3, 4}}), Rational(2));
  EXPECT_EQ(rule(Flat(Ids({1, 2, 3, 4}), 7)), Rational(7));
  EXPECT_EQ(rule(BidVector{{1, 4}, {2, 4}, {3, 1}}), Rational(4));
}

TEST(SecondPriceTest, ArityError)
{
  try
  {
    rules::SecondPrice()(BidVector{{1, 3}});
    FAIL();
  }
  catch (RuleUndefined const &e)
  {
    EXPECT_STREQ(e.what(), "rule undefined on this arity");
  }
  EXPECT_THROW(rules::NegSecondPrice()(BidVector{}), RuleUndefined);
  EXPECT_THROW(rules::FirstPrice()(BidVector{}), RuleUndefined);
  EXPECT_EQ(rules::FirstPrice()(BidVector{{1, 3}}), Rational(3));
}

TEST(PriceRuleTest, RegistryNames)
{
  EXPECT_EQ(RuleFromName("second-price").name(), "second-price");
  EXPECT_EQ(RuleFromName("neg-first-price").name(), "neg-first-price");
  auto const c = RuleFromName("constant:-3/2");
  EXPECT_EQ(c.name(), "constant:-3/2");
  EXPECT_EQ(c(BidVector{{1, 1}, {2, 9}}), MakeRational(-3, 2));
  EXPECT_EQ(RuleFromName("constant:7")(BidVector{{4, 0}}), Rational(7));
  EXPECT_THROW(RuleFromName("third-price"), PreconditionError);
  EXPECT_THROW(RuleFromName("constant:1/0"), ParseError);
}

TEST(ExternalRuleTest, TableLookup)
{
  BidVector const low{{1, 1}, {2, 2}, {3, 4}};
  BidVector const high{{1, 1}, {2, 3}, {3, 4}};
  auto const g = RegisterExternal("g", {{low, -4}, {high, -4}});
  EXPECT_EQ(g(high) - g(low), Rational(0));

  auto const single = RegisterExternal("one", {{low, MakeRational(5, 7)}});
  EXPECT_EQ(single(low), MakeRational(5, 7));
  try
  {
    single(high);
    FAIL();
  }
  catch (RuleUndefined const &e)
  {
    EXPECT_NE(std::string(e.what()).find("rule undefined at this bid vector"), std::string::npos);
  }
  EXPECT_THROW(RegisterExternal("empty", {}), PreconditionError);
}

TEST(FlatInvarianceTest, Examples)
{
  IdSet const ids = Ids({1, 2, 3});
  // Members of the form ({1,2} x {b0}) plus a completion of {3: 1}, b0 above every bid.
  BidVectorSet const x{{{1, 5}, {2, 5}, {3, 5}}, {{1, 5}, {2, 5}, {3, 1}}};
  EXPECT_TRUE(CheckFlatInvariance(rules::NegSecondPrice(), x, ids, 5));
  EXPECT_TRUE(CheckFlatInvariance(rules::Constant(MakeRational(-1, 3)), x, ids, 2));

  BidVectorSet const bad{{{1, 9}, {2, 1}, {3, 1}}, {{1, 9}, {2, 9}, {3, 1}}};
  EXPECT_FALSE(CheckFlatInvariance(rules::SecondPrice(), bad, ids, 1));
  EXPECT_THROW(CheckFlatInvariance(rules::SecondPrice(), BidVectorSet{{{1, 1}, {2, 1}}}, ids, 1),
               PreconditionError);
}

TEST(PriceRuleProperty, RelabelingSignsAndOrder)
{
  std::mt19937_64 rng(31);
  std::vector<PriceRule> const all{rules::SecondPrice(), rules::NegSecondPrice(), rules::FirstPrice(),
                                   rules::NegFirstPrice(), rules::Constant(3)};
  for (int trial = 0; trial < 300; ++trial)
  {
    std::uniform_int_distribution<std::size_t> size(2, 8);
    BidVector const b = testing::RandomBidVector(rng, size(rng));
    BidVector const relabeled = testing::Relabel(b, testing::RandomRelabeling(rng, b.Domain()));
    for (auto const &rule : all)
    {
      EXPECT_EQ(rule(b), rule(relabeled)) << rule.name();
    }
    EXPECT_EQ(rules::SecondPrice()(b), testing::SortedSecondPrice(b));
    EXPECT_LE(rules::SecondPrice()(b), rules::FirstPrice()(b));
    EXPECT_EQ(rules::NegSecondPrice()(b), -rules::SecondPrice()(b));
    EXPECT_EQ(rules::NegFirstPrice()(b), -rules::FirstPrice()(b));
  }
}

}  // namespace
}  // namespace imbalance
