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

// Test-only reference computations. Nothing here calls the enumeration,
// completion or elimination code it is used to check.

#include "imbalance/bids.hpp"
#include "imbalance/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

namespace imbalance::testing {

/// Sub-multisets by walking every subset of element positions.
inline std::set<BidMultiset> BruteSubMultisets(BidMultiset const &m)
{
  auto const elements = m.Elements();
  std::set<BidMultiset> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << elements.size()); ++mask)
  {
    BidMultiset sub;
    for (std::size_t k = 0; k < elements.size(); ++k)
    {
      if (mask & (std::uint64_t{1} << k))
      {
        sub.Add(elements[k]);
      }
    }
    out.insert(sub);
  }
  return out;
}

/// Sub-functions of `b` with bag `m`, by filtering the power set of dom b.
inline std::set<BidVector> BruteRestrictions(BidVector const &b, BidMultiset const &m)
{
  std::vector<std::pair<BidderId, Rational>> const pairs(b.begin(), b.end());
  std::set<BidVector> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask)
  {
    BidVector sub;
    BidMultiset bag;
    for (std::size_t k = 0; k < pairs.size(); ++k)
    {
      if (mask & (std::uint64_t{1} << k))
      {
        sub.Insert(pairs[k].first, pairs[k].second);
        bag.Add(pairs[k].second);
      }
    }
    if (bag == m)
    {
      out.insert(sub);
    }
  }
  return out;
}

/// Second-highest bid counting multiplicity, by sorting.
inline Rational SortedSecondPrice(BidVector const &b)
{
  std::vector<Rational> bids;
  for (auto const &e : b)
  {
    bids.push_back(e.second);
  }
  std::sort(bids.begin(), bids.end(), std::greater<>());
  return bids.at(1);
}

/// Sides of the inequality for the second-price instance with f = second
/// price, written out as plain arithmetic in n:
///   low  = (n+1) - (n+3)(n+1)/(n+2) - (n+1)/(n+2)
///   high = (n+2) - (n+3)(n+1)/(n+2) - (n+2)/(n+2)
/// With f = -second price both are negated.
struct VickreySides
{
  Rational low;
  Rational high;
};

inline VickreySides SymbolicVickreySides(std::int64_t n)
{
  Rational const np1(n + 1);
  Rational const np2(n + 2);
  Rational const np3(n + 3);
  Rational const shared = np3 * np1 / np2;
  Rational const low    = np1 - shared - np1 / np2;
  Rational const high   = np2 - shared - np2 / np2;
  return {-low, -high};
}

/// Random rational with numerator in [-bound, bound] and denominator in [1, den_bound].
inline Rational RandomRational(std::mt19937_64 &rng, std::int64_t bound, std::int64_t den_bound)
{
  std::uniform_int_distribution<std::int64_t> num(-bound, bound);
  std::uniform_int_distribution<std::int64_t> den(1, den_bound);
  return MakeRational(Integer(num(rng)), Integer(den(rng)));
}

/// Non-negative rational bid drawn from a small grid so that ties happen.
inline Rational RandomBid(std::mt19937_64 &rng, std::int64_t bound = 6, std::int64_t den_bound = 2)
{
  std::uniform_int_distribution<std::int64_t> num(0, bound);
  std::uniform_int_distribution<std::int64_t> den(1, den_bound);
  return MakeRational(Integer(num(rng)), Integer(den(rng)));
}

/// Vector of `size` bids on ids drawn without replacement from [first, first + 3*size].
inline BidVector RandomBidVector(std::mt19937_64 &rng, std::size_t size, std::uint64_t first = 1)
{
  std::vector<std::uint64_t> ids;
  for (std::uint64_t k = 0; k < 3 * size + 1; ++k)
  {
    ids.push_back(first + k);
  }
  std::shuffle(ids.begin(), ids.end(), rng);
  BidVector b;
  for (std::size_t k = 0; k < size; ++k)
  {
    b.Insert(BidderId{ids[k]}, RandomBid(rng));
  }
  return b;
}

/// Applies a bidder relabeling to every pair.
inline BidVector Relabel(BidVector const &b, std::map<BidderId, BidderId> const &perm)
{
  BidVector out;
  for (auto const &[id, bid] : b)
  {
    out.Insert(perm.at(id), bid);
  }
  return out;
}

/// A random bijection of `ids` onto fresh labels 100, 101, ...
inline std::map<BidderId, BidderId> RandomRelabeling(std::mt19937_64 &rng, IdSet const &ids)
{
  std::vector<std::uint64_t> targets;
  for (std::uint64_t k = 0; k < ids.size(); ++k)
  {
    targets.push_back(100 + k);
  }
  std::shuffle(targets.begin(), targets.end(), rng);
  std::map<BidderId, BidderId> perm;
  std::size_t k = 0;
  for (auto id : ids)
  {
    perm.emplace(id, BidderId{targets[k++]});
  }
  return perm;
}

}  // namespace imbalance::testing
