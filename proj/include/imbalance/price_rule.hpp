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
#include "imbalance/rational.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

namespace imbalance {

/**
 * A price rule: a named map from bid vectors to rationals.
 *
 * The built-in rules depend on the bag of bids only, so they are invariant
 * under relabeling the bidders. Table-backed rules are defined exactly on
 * the vectors of their table.
 */
class PriceRule
{
public:
  using Evaluator = std::function<Rational(BidVector const &)>;

  PriceRule(std::string name, Evaluator evaluator)
    : name_(std::move(name))
    , evaluator_(std::move(evaluator))
  {}

  std::string const &name() const noexcept
  {
    return name_;
  }

  Rational operator()(BidVector const &b) const
  {
    return evaluator_(b);
  }

private:
  std::string name_;
  Evaluator   evaluator_;
};

inline Rational Eval(PriceRule const &rule, BidVector const &b)
{
  return rule(b);
}

namespace rules {
namespace detail {

inline void RequireArity(BidVector const &b, std::size_t minimum)
{
  if (b.size() < minimum)
  {
    throw RuleUndefined("rule undefined on this arity");
  }
}

// Largest bid and the largest bid left after deleting one occurrence of it.
inline std::pair<Rational, Rational> TopTwo(BidVector const &b)
{
  auto it     = b.begin();
  Rational hi = it->second;
  ++it;
  Rational second = it->second;
  if (second > hi)
  {
    std::swap(hi, second);
  }
  for (++it; it != b.end(); ++it)
  {
    Rational const &v = it->second;
    if (v > hi)
    {
      second = hi;
      hi     = v;
    }
    else if (v > second)
    {
      second = v;
    }
  }
  return {hi, second};
}

inline Rational Max(BidVector const &b)
{
  auto it     = b.begin();
  Rational hi = it->second;
  for (++it; it != b.end(); ++it)
  {
    if (it->second > hi)
    {
      hi = it->second;
    }
  }
  return hi;
}

}  // namespace detail

/// Highest bid once one occurrence of the maximum is removed.
inline PriceRule SecondPrice()
{
  return {"second-price", [](BidVector const &b) {
            detail::RequireArity(b, 2);
            return detail::TopTwo(b).second;
          }};
}

inline PriceRule NegSecondPrice()
{
  return {"neg-second-price", [](BidVector const &b) {
            detail::RequireArity(b, 2);
            return -detail::TopTwo(b).second;
          }};
}

inline PriceRule FirstPrice()
{
  return {"first-price", [](BidVector const &b) {
            detail::RequireArity(b, 1);
            return detail::Max(b);
          }};
}

inline PriceRule NegFirstPrice()
{
  return {"neg-first-price", [](BidVector const &b) {
            detail::RequireArity(b, 1);
            return -detail::Max(b);
          }};
}

inline PriceRule Constant(Rational value)
{
  std::string name = "constant:" + value.ToString();
  return {std::move(name), [value = std::move(value)](BidVector const &b) {
            detail::RequireArity(b, 1);
            return value;
          }};
}

}  // namespace rules

/// A rule defined exactly on the keys of `table`.
inline PriceRule RegisterExternal(std::string name, std::map<BidVector, Rational> table)
{
  if (table.empty())
  {
    throw PreconditionError("external rule '" + name + "' needs a nonempty table");
  }
  auto shared = std::make_shared<std::map<BidVector, Rational> const>(std::move(table));
  return {std::move(name), [shared](BidVector const &b) {
            auto it = shared->find(b);
            if (it == shared->end())
            {
              throw RuleUndefined("rule undefined at this bid vector " + ToString(b));
            }
            return it->second;
          }};
}

/// Looks up a built-in rule by its registry name, e.g. `neg-second-price`
/// or `constant:-3/2`.
inline PriceRule RuleFromName(std::string_view name)
{
  if (name == "second-price")
  {
    return rules::SecondPrice();
  }
  if (name == "neg-second-price")
  {
    return rules::NegSecondPrice();
  }
  if (name == "first-price")
  {
    return rules::FirstPrice();
  }
  if (name == "neg-first-price")
  {
    return rules::NegFirstPrice();
  }
  constexpr std::string_view kConstant = "constant:";
  if (name.substr(0, kConstant.size()) == kConstant)
  {
    return rules::Constant(Rational::Parse(name.substr(kConstant.size())));
  }
  throw PreconditionError("unknown rule '" + std::string(name) + "'");
}

/**
 * True iff `rule` takes on every member of `vectors` the value it takes on
 * the flat vector `ids x {fill}`. Every member must have domain `ids`.
 */
inline bool CheckFlatInvariance(PriceRule const &rule, BidVectorSet const &vectors, IdSet const &ids,
                                Rational const &fill)
{
  Rational const reference = rule(Flat(ids, fill));
  for (auto const &b : vectors)
  {
    if (b.Domain() != ids)
    {
      throw PreconditionError("domain mismatch in flat-invariance check at " + ToString(b));
    }
    if (rule(b) != reference)
    {
      return false;
    }
  }
  return true;
}

}  // namespace imbalance
