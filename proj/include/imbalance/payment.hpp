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
#include "imbalance/price_rule.hpp"
#include "imbalance/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace imbalance {

/**
 * Partial map from bags of bids to the symmetric payment charged to a bidder
 * who faces exactly those competing bids. Lookups of unrecorded bags throw.
 */
class PaymentTable
{
public:
  using Map            = std::map<BidMultiset, Rational>;
  using const_iterator = Map::const_iterator;

  void Set(BidMultiset bag, Rational value)
  {
    values_.insert_or_assign(std::move(bag), std::move(value));
  }

  Rational const &at(BidMultiset const &bag) const
  {
    auto it = values_.find(bag);
    if (it == values_.end())
    {
      throw PreconditionError("no payment recorded for " + ToString(bag));
    }
    return it->second;
  }

  bool contains(BidMultiset const &bag) const
  {
    return values_.count(bag) != 0;
  }

  std::size_t size() const noexcept
  {
    return values_.size();
  }

  bool empty() const noexcept
  {
    return values_.empty();
  }

  const_iterator begin() const noexcept
  {
    return values_.begin();
  }

  const_iterator end() const noexcept
  {
    return values_.end();
  }

  bool operator==(PaymentTable const &) const = default;

private:
  Map values_;
};

/**
 * A set of bid vectors built for the quintuple (base, fill, rule, first,
 * second): the two extra bidders bid `fill`, and the rest ranges over a full
 * family of `fill`-completions of `base`.
 *
 * `flat_invariant` records whether the rule takes the same value on every
 * member as on the all-`fill` vector; `offending` names the first member
 * where it does not.
 */
struct AdequateSet
{
  BidVectorSet             members;
  BidVector                base;
  Rational                 fill;
  PriceRule                rule;
  BidderId                 first;
  BidderId                 second;
  bool                     flat_invariant = false;
  std::optional<BidVector> offending;
};

/// Outcome of checking a candidate set against the two adequacy conditions.
struct AdequacyCheck
{
  bool        structural     = false;
  bool        flat_invariant = false;
  std::string detail;

  explicit operator bool() const noexcept
  {
    return structural && flat_invariant;
  }
};

namespace detail {

inline IdSet JoinedDomain(BidVector const &base, BidderId first, BidderId second)
{
  IdSet ids = base.Domain();
  ids.insert(first);
  ids.insert(second);
  return ids;
}

inline std::optional<std::string> CheckFreshIds(BidVector const &base, BidderId first, BidderId second)
{
  if (first == second || base.contains(first) || base.contains(second))
  {
    return "i1,i2 must be fresh and distinct";
  }
  return std::nullopt;
}

// The bags m for which `y` is an m-completion of `base` to `fill`, or empty
// when `y` is no completion at all.
inline std::vector<BidMultiset> CompletionBags(BidVector const &y, BidVector const &base, Rational const &fill)
{
  if (y.Domain() != base.Domain())
  {
    return {};
  }
  BidMultiset kept;
  std::size_t optional_fill = 0;
  for (auto const &[id, bid] : y)
  {
    Rational const &original = base.at(id);
    if (bid != fill)
    {
      if (bid != original)
      {
        return {};
      }
      kept.Add(bid);
    }
    else if (original == fill)
    {
      ++optional_fill;
    }
  }
  std::vector<BidMultiset> bags;
  for (std::size_t t = 0; t <= optional_fill; ++t)
  {
    BidMultiset m = kept;
    m.Add(fill, t);
    bags.push_back(std::move(m));
  }
  return bags;
}

// Kuhn's augmenting-path matching of left vertices into right vertices.
inline std::size_t MaximumMatching(std::vector<std::vector<std::size_t>> const &edges, std::size_t right_size)
{
  std::vector<std::optional<std::size_t>> owner(right_size);
  std::size_t                             matched = 0;
  for (std::size_t left = 0; left < edges.size(); ++left)
  {
    std::vector<bool>                  seen(right_size, false);
    std::function<bool(std::size_t)> augment = [&](std::size_t u) {
      for (auto v : edges[u])
      {
        if (seen[v])
        {
          continue;
        }
        seen[v] = true;
        if (!owner[v] || augment(*owner[v]))
        {
          owner[v] = u;
          return true;
        }
      }
      return false;
    };
    if (augment(left))
    {
      ++matched;
    }
  }
  return matched;
}

}  // namespace detail

/**
 * Checks both adequacy conditions for `candidates`:
 *
 *  - structural: the set equals `({first, second} x {fill}) ⇀ Y` for some
 *    full family Y of `fill`-completions of `base`. Y need not be the
 *    canonical family; any choice of one completion per sub-multiset works.
 *  - flat invariance: `rule` is constant on the set, equal to its value on
 *    the all-`fill` vector over `dom base ∪ {first, second}`.
 *
 * Never throws; any violation yields a false flag and a description.
 */
inline AdequacyCheck CheckAdequacy(BidVectorSet const &candidates, BidVector const &base, Rational const &fill,
                                   PriceRule const &rule, BidderId first, BidderId second)
{
  AdequacyCheck check;
  if (auto bad = detail::CheckFreshIds(base, first, second))
  {
    check.detail = *bad;
    return check;
  }
  IdSet const ids = detail::JoinedDomain(base, first, second);

  auto const subs = SubMultisets(BagOf(base));
  std::map<BidMultiset, std::size_t> sub_index;
  for (std::size_t k = 0; k < subs.size(); ++k)
  {
    sub_index.emplace(subs[k], k);
  }

  // Structural condition: each member strips to a completion, every
  // sub-multiset is served, and the members can be assigned distinct bags
  // so that the family uses all of them.
  std::vector<std::vector<std::size_t>> serves;
  std::vector<bool>                     covered(subs.size(), false);
  std::string                           structural_detail;
  for (auto const &x : candidates)
  {
    if (x.Domain() != ids || x.at(first) != fill || x.at(second) != fill)
    {
      structural_detail = "member " + ToString(x) + " does not put " + fill.ToString() + " on both extra bidders";
      break;
    }
    auto const bags = detail::CompletionBags(Remove(x, IdSet{first, second}), base, fill);
    if (bags.empty())
    {
      structural_detail = "member " + ToString(x) + " is not a completion of " + ToString(base);
      break;
    }
    std::vector<std::size_t> served;
    for (auto const &m : bags)
    {
      auto const k = sub_index.at(m);
      covered[k]   = true;
      served.push_back(k);
    }
    serves.push_back(std::move(served));
  }
  if (structural_detail.empty())
  {
    auto missing = std::find(covered.begin(), covered.end(), false);
    if (missing != covered.end())
    {
      structural_detail = "no member completes sub-multiset " + ToString(subs[static_cast<std::size_t>(missing - covered.begin())]);
    }
    else if (detail::MaximumMatching(serves, subs.size()) != serves.size())
    {
      structural_detail = "members cannot be assigned distinct sub-multisets";
    }
  }
  check.structural = structural_detail.empty();

  std::string invariance_detail;
  try
  {
    Rational const reference = rule(Flat(ids, fill));
    for (auto const &x : candidates)
    {
      if (rule(x) != reference)
      {
        invariance_detail = "rule " + rule.name() + " gives " + rule(x).ToString() + " at " + ToString(x) +
                            " but " + reference.ToString() + " on the flat vector";
        break;
      }
    }
  }
  catch (Error const &e)
  {
    invariance_detail = e.what();
  }
  check.flat_invariant = invariance_detail.empty();

  if (!check.structural)
  {
    check.detail = structural_detail;
  }
  else if (!check.flat_invariant)
  {
    check.detail = invariance_detail;
  }
  return check;
}

inline bool IsAdequate(BidVectorSet const &candidates, BidVector const &base, Rational const &fill,
                       PriceRule const &rule, BidderId first, BidderId second)
{
  return static_cast<bool>(CheckAdequacy(candidates, base, fill, rule, first, second));
}

/// Canonical adequate-set candidate for the quintuple. Flat invariance is
/// evaluated and reported, not assumed.
inline AdequateSet BuildAdequateSet(BidVector const &base, Rational const &fill, PriceRule const &rule,
                                    BidderId first, BidderId second)
{
  if (auto bad = detail::CheckFreshIds(base, first, second))
  {
    throw PreconditionError(*bad);
  }
  AdequateSet set{{}, base, fill, rule, first, second, true, std::nullopt};
  set.members = Extend(Flat(IdSet{first, second}, fill), MakeFullFamily(base, fill).Members());

  Rational const reference = rule(Flat(detail::JoinedDomain(base, first, second), fill));
  for (auto const &x : set.members)
  {
    if (rule(x) != reference)
    {
      set.flat_invariant = false;
      set.offending      = x;
      break;
    }
  }
  return set;
}

/**
 * The payment forced on `BagOf(base) + [fill]` by imposing balance on the
 * adequate set of the quintuple:
 *
 *     rule(flat(dom base ∪ {first, second}, fill)) / (2 + |dom base|)
 *
 * The adequacy conditions are re-checked here; a violation throws.
 */
inline Rational ClosedFormPrice(BidVector const &base, Rational const &fill, PriceRule const &rule, BidderId first,
                                BidderId second)
{
  auto const set   = BuildAdequateSet(base, fill, rule, first, second);
  auto const check = CheckAdequacy(set.members, base, fill, rule, first, second);
  if (!check)
  {
    throw PreconditionError("closed-form price hypotheses fail: " + check.detail);
  }
  Rational const flat_value = rule(Flat(detail::JoinedDomain(base, first, second), fill));
  return flat_value / Rational(base.size() + 2);
}

inline Rational ClosedFormPrice(BidVector const &base, Rational const &fill, PriceRule const &rule)
{
  auto const [first, second] = FreshIds(base);
  return ClosedFormPrice(base, fill, rule, first, second);
}

/// One elimination step: `shape` is the bag whose payment was derived,
/// `extras` how many non-fill bids it carries, and the payment equals
/// `coefficient * rule(all-fill vector)`.
struct IterationStep
{
  BidMultiset shape;
  std::size_t extras = 0;
  Rational    coefficient;
  Rational    ratio{1};  // rule(visited) / rule(flat); fixed to one
};

struct IterationTrace
{
  std::size_t                bidders = 0;
  std::vector<IterationStep> steps;
};

struct IterationResult
{
  PaymentTable   table;
  IterationTrace trace;
};

/**
 * Derives payments by successive elimination over `bidders` bidders who all
 * bid `fill` except for a growing sub-bag of `extras`.
 *
 * For each sub-bag S of the extras (smallest first) the vector putting S on
 * bidders 1..|S| and `fill` elsewhere must satisfy the balance equation
 *
 *     sum_i P(bag(b - i)) = rule(b),
 *
 * and `rule(b)` must equal the all-`fill` value. Deleting a bidder holding
 * an extra gives a previously derived bag; the remaining `bidders - |S|`
 * deletions give the new bag `S + [fill x (bidders - 1 - |S|)]`, so its
 * coefficient is `(1 - sum of earlier coefficients) / (bidders - |S|)`.
 */
inline IterationResult IterateTable(std::size_t bidders, Rational const &fill, std::vector<Rational> const &extras,
                                    PriceRule const &rule)
{
  if (bidders < 2)
  {
    throw PreconditionError("iteration needs at least two bidders");
  }
  if (extras.size() + 2 > bidders)
  {
    throw PreconditionError("at most bidders - 2 extra bids are allowed");
  }

  IdSet ids;
  for (std::uint64_t k = 1; k <= bidders; ++k)
  {
    ids.insert(BidderId{k});
  }
  Rational const reference = rule(Flat(ids, fill));

  BidMultiset extras_bag;
  for (auto const &e : extras)
  {
    extras_bag.Add(e);
  }
  auto subs = SubMultisets(extras_bag);
  std::stable_sort(subs.begin(), subs.end(),
                   [](BidMultiset const &a, BidMultiset const &b) { return a.size() < b.size(); });

  IterationResult                    result;
  std::map<BidMultiset, Rational>    coefficient_of;
  result.trace.bidders = bidders;
  for (auto const &sub : subs)
  {
    std::size_t const j = sub.size();

    BidVector   visited;
    std::uint64_t id = 1;
    for (auto const &e : sub.Elements())
    {
      visited.Insert(BidderId{id++}, e);
    }
    while (id <= bidders)
    {
      visited.Insert(BidderId{id++}, fill);
    }
    if (rule(visited) != reference)
    {
      throw PreconditionError("flat invariance fails at step k_" + std::to_string(j) + " on " + ToString(visited));
    }

    Rational numerator{1};
    for (auto const &[value, count] : sub.counts())
    {
      BidMultiset smaller = sub;
      smaller.RemoveOne(value);
      numerator -= Rational(count) * coefficient_of.at(smaller);
    }
    Rational const k = numerator / Rational(bidders - j);
    coefficient_of.emplace(sub, k);

    BidMultiset shape = sub;
    shape.Add(fill, bidders - 1 - j);
    Rational const value = k * reference;
    if (result.table.contains(shape) && result.table.at(shape) != value)
    {
      throw Error("inconsistent payments derived for " + ToString(shape));
    }
    result.table.Set(shape, value);
    result.trace.steps.push_back({std::move(shape), j, k, Rational{1}});
  }
  return result;
}

/// Sum of forced payments over all bidders of a vector, together with the
/// per-bidder flat values `eta(i) = rule(dom b x {b(selector(i))})`.
struct PaymentSum
{
  Rational                      sum;
  std::map<BidderId, Rational>  eta;
  std::map<BidderId, Rational>  payments;
};

/**
 * For each bidder i, pairs i with `selectors[i]` and uses the adequate set of
 * `(b - {i, j}, b(j), rule, i, j)` to force P(bag(b - i)). The returned sum
 * is `(1/|dom b|) * sum_i eta(i)`; `payments` holds the individual forced
 * values, which add up to the same number.
 */
inline PaymentSum BalancedPaymentSum(BidVector const &b, PriceRule const &rule,
                                     std::map<BidderId, BidderId> const &selectors)
{
  if (b.empty())
  {
    throw PreconditionError("payment sum needs a nonempty bid vector");
  }
  IdSet const ids = b.Domain();
  PaymentSum  out;
  for (auto const &[i, bid] : b)
  {
    auto it = selectors.find(i);
    if (it == selectors.end() || it->second == i || !b.contains(it->second))
    {
      throw PreconditionError("bidder " + std::to_string(i.value) + " has no valid partner");
    }
    BidderId const  j    = it->second;
    Rational const &fill = b.at(j);
    BidVector const base = Remove(b, IdSet{i, j});

    auto const set   = BuildAdequateSet(base, fill, rule, i, j);
    auto const check = CheckAdequacy(set.members, base, fill, rule, i, j);
    if (!check)
    {
      throw PreconditionError("bidder " + std::to_string(i.value) + ": " + check.detail);
    }
    out.payments.emplace(i, ClosedFormPrice(base, fill, rule, i, j));
    Rational eta = rule(Flat(ids, fill));
    out.sum += eta;
    out.eta.emplace(i, std::move(eta));
  }
  out.sum /= Rational(b.size());
  return out;
}

}  // namespace imbalance
