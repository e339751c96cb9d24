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

#include "imbalance/error.hpp"
#include "imbalance/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace imbalance {

struct BidderId
{
  std::uint64_t value{};

  auto operator<=>(BidderId const &) const = default;
};

using IdSet = std::set<BidderId>;

/**
 * A bid vector: a finite map from bidder to bid, treated as its graph.
 *
 * Equality and ordering are extensional on the set of (id, bid) pairs, which
 * makes `std::set<BidVector>` a faithful model of a set of bid vectors.
 */
class BidVector
{
public:
  using Map            = std::map<BidderId, Rational>;
  using const_iterator = Map::const_iterator;

  BidVector() = default;

  BidVector(std::initializer_list<std::pair<std::uint64_t, Rational>> entries)
  {
    for (auto const &[id, bid] : entries)
    {
      Insert(BidderId{id}, bid);
    }
  }

  /// Adds a pair; the id must not already be in the domain.
  void Insert(BidderId id, Rational bid)
  {
    if (!entries_.emplace(id, std::move(bid)).second)
    {
      throw PreconditionError("duplicate bidder id " + std::to_string(id.value));
    }
  }

  void Assign(BidderId id, Rational bid)
  {
    entries_.insert_or_assign(id, std::move(bid));
  }

  Rational const &at(BidderId id) const
  {
    auto it = entries_.find(id);
    if (it == entries_.end())
    {
      throw PreconditionError("bidder " + std::to_string(id.value) + " is not in the domain");
    }
    return it->second;
  }

  bool contains(BidderId id) const
  {
    return entries_.count(id) != 0;
  }

  std::size_t size() const noexcept
  {
    return entries_.size();
  }

  bool empty() const noexcept
  {
    return entries_.empty();
  }

  const_iterator begin() const noexcept
  {
    return entries_.begin();
  }

  const_iterator end() const noexcept
  {
    return entries_.end();
  }

  IdSet Domain() const
  {
    IdSet ids;
    for (auto const &entry : entries_)
    {
      ids.insert(ids.end(), entry.first);
    }
    return ids;
  }

  Map const &entries() const noexcept
  {
    return entries_;
  }

  bool operator==(BidVector const &) const = default;
  auto operator<=>(BidVector const &) const = default;

private:
  Map entries_;
};

using BidVectorSet = std::set<BidVector>;

/**
 * A finite bag of bids. Multiplicities are always positive; a value with
 * multiplicity zero is simply absent.
 *
 * Ordering compares the ascending expansions of two bags lexicographically,
 * so e.g. [1] < [1, 1] < [1, 2] < [2].
 */
class BidMultiset
{
public:
  using Counts = std::map<Rational, std::size_t>;

  BidMultiset() = default;

  BidMultiset(std::initializer_list<Rational> values)
  {
    for (auto const &v : values)
    {
      Add(v);
    }
  }

  void Add(Rational const &value, std::size_t times = 1)
  {
    if (times == 0)
    {
      return;
    }
    counts_[value] += times;
    size_ += times;
  }

  /// Removes one occurrence of `value`.
  void RemoveOne(Rational const &value)
  {
    auto it = counts_.find(value);
    if (it == counts_.end())
    {
      throw PreconditionError("value " + value.ToString() + " is not in the multiset");
    }
    if (--it->second == 0)
    {
      counts_.erase(it);
    }
    --size_;
  }

  std::size_t Count(Rational const &value) const
  {
    auto it = counts_.find(value);
    return it == counts_.end() ? 0 : it->second;
  }

  std::size_t size() const noexcept
  {
    return size_;
  }

  std::size_t distinct() const noexcept
  {
    return counts_.size();
  }

  bool empty() const noexcept
  {
    return size_ == 0;
  }

  Counts const &counts() const noexcept
  {
    return counts_;
  }

  /// Ascending list of elements, repeated according to multiplicity.
  std::vector<Rational> Elements() const
  {
    std::vector<Rational> out;
    out.reserve(size_);
    for (auto const &[value, count] : counts_)
    {
      out.insert(out.end(), count, value);
    }
    return out;
  }

  /// Sub-multiset order: every multiplicity of `*this` is at most that in `other`.
  bool IsSubMultisetOf(BidMultiset const &other) const
  {
    if (size_ > other.size_)
    {
      return false;
    }
    return std::all_of(counts_.begin(), counts_.end(),
                       [&](auto const &entry) { return entry.second <= other.Count(entry.first); });
  }

  friend BidMultiset operator+(BidMultiset a, BidMultiset const &b)
  {
    for (auto const &[value, count] : b.counts_)
    {
      a.Add(value, count);
    }
    return a;
  }

  friend bool operator==(BidMultiset const &a, BidMultiset const &b)
  {
    return a.counts_ == b.counts_;
  }

  friend std::strong_ordering operator<=>(BidMultiset const &a, BidMultiset const &b)
  {
    auto ia = a.counts_.begin();
    auto ib = b.counts_.begin();
    std::size_t ra = ia == a.counts_.end() ? 0 : ia->second;
    std::size_t rb = ib == b.counts_.end() ? 0 : ib->second;
    while (true)
    {
      if (ia == a.counts_.end())
      {
        return ib == b.counts_.end() ? std::strong_ordering::equal : std::strong_ordering::less;
      }
      if (ib == b.counts_.end())
      {
        return std::strong_ordering::greater;
      }
      if (auto c = ia->first <=> ib->first; c != 0)
      {
        return c;
      }
      std::size_t const take = std::min(ra, rb);
      ra -= take;
      rb -= take;
      if (ra == 0 && ++ia != a.counts_.end())
      {
        ra = ia->second;
      }
      if (rb == 0 && ++ib != b.counts_.end())
      {
        rb = ib->second;
      }
    }
  }

private:
  Counts      counts_;
  std::size_t size_ = 0;
};

inline std::string ToString(BidVector const &b)
{
  std::string out = "{";
  bool first      = true;
  for (auto const &[id, bid] : b)
  {
    if (!first)
    {
      out += ", ";
    }
    first = false;
    out += std::to_string(id.value) + ":" + bid.ToString();
  }
  return out + "}";
}

inline std::string ToString(BidMultiset const &m)
{
  std::string out = "[";
  bool first      = true;
  for (auto const &v : m.Elements())
  {
    if (!first)
    {
      out += ", ";
    }
    first = false;
    out += v.ToString();
  }
  return out + "]";
}

/// The bag of bids of `b`: its range counted with multiplicity.
inline BidMultiset BagOf(BidVector const &b)
{
  BidMultiset bag;
  for (auto const &entry : b)
  {
    bag.Add(entry.second);
  }
  return bag;
}

/// Restriction of `b` to `dom b \ ids`. Absent ids are ignored.
inline BidVector Remove(BidVector const &b, IdSet const &ids)
{
  BidVector out;
  for (auto const &[id, bid] : b)
  {
    if (ids.count(id) == 0)
    {
      out.Insert(id, bid);
    }
  }
  return out;
}

inline BidVector Remove(BidVector const &b, BidderId id)
{
  return Remove(b, IdSet{id});
}

/// Bidders whose bid lies in `values`.
inline IdSet Preimage(BidVector const &b, std::set<Rational> const &values)
{
  IdSet ids;
  for (auto const &[id, bid] : b)
  {
    if (values.count(bid) != 0)
    {
      ids.insert(id);
    }
  }
  return ids;
}

/// The constant vector `ids x {value}`.
inline BidVector Flat(IdSet const &ids, Rational const &value)
{
  BidVector out;
  for (auto id : ids)
  {
    out.Insert(id, value);
  }
  return out;
}

/**
 * All sub-multisets of `m`, each exactly once.
 *
 * The order is an odometer over multiplicities where the smallest value
 * turns fastest: for [1, 1, 2] this yields [], [1], [1, 1], [2], [1, 2],
 * [1, 1, 2]. The count is the product of (multiplicity + 1) over distinct
 * values, so callers should keep the number of distinct values small.
 */
inline std::vector<BidMultiset> SubMultisets(BidMultiset const &m)
{
  std::vector<std::pair<Rational, std::size_t>> const slots(m.counts().begin(), m.counts().end());
  std::vector<std::size_t> digits(slots.size(), 0);
  std::vector<BidMultiset> out;
  while (true)
  {
    BidMultiset sub;
    for (std::size_t k = 0; k < slots.size(); ++k)
    {
      sub.Add(slots[k].first, digits[k]);
    }
    out.push_back(std::move(sub));

    std::size_t k = 0;
    while (k < slots.size() && digits[k] == slots[k].second)
    {
      digits[k] = 0;
      ++k;
    }
    if (k == slots.size())
    {
      break;
    }
    ++digits[k];
  }
  return out;
}

namespace detail {

/// All `k`-element combinations of `items`, lexicographic.
inline std::vector<std::vector<BidderId>> Combinations(std::vector<BidderId> const &items, std::size_t k)
{
  std::vector<std::vector<BidderId>> out;
  if (k > items.size())
  {
    return out;
  }
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i)
  {
    idx[i] = i;
  }
  while (true)
  {
    std::vector<BidderId> combo;
    combo.reserve(k);
    for (auto i : idx)
    {
      combo.push_back(items[i]);
    }
    out.push_back(std::move(combo));

    std::size_t i = k;
    while (i > 0 && idx[i - 1] == items.size() - k + (i - 1))
    {
      --i;
    }
    if (i == 0)
    {
      break;
    }
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j)
    {
      idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

inline std::map<Rational, std::vector<BidderId>> IdsByBid(BidVector const &b)
{
  std::map<Rational, std::vector<BidderId>> by_bid;
  for (auto const &[id, bid] : b)
  {
    by_bid[bid].push_back(id);
  }
  return by_bid;
}

}  // namespace detail

/**
 * Every sub-function `r` of `b` with `BagOf(r) == m`, ordered by the sorted
 * tuple of bidder ids. Empty when `m` is not a sub-multiset of `BagOf(b)`.
 */
inline std::vector<BidVector> Restrictions(BidVector const &b, BidMultiset const &m)
{
  if (!m.IsSubMultisetOf(BagOf(b)))
  {
    return {};
  }
  auto const by_bid = detail::IdsByBid(b);

  std::vector<std::vector<std::vector<BidderId>>> choices;
  for (auto const &[value, count] : m.counts())
  {
    choices.push_back(detail::Combinations(by_bid.at(value), count));
  }

  std::vector<std::vector<BidderId>> id_tuples;
  std::vector<std::size_t>           pick(choices.size(), 0);
  while (true)
  {
    std::vector<BidderId> ids;
    for (std::size_t k = 0; k < choices.size(); ++k)
    {
      auto const &chosen = choices[k][pick[k]];
      ids.insert(ids.end(), chosen.begin(), chosen.end());
    }
    std::sort(ids.begin(), ids.end());
    id_tuples.push_back(std::move(ids));

    std::size_t k = 0;
    while (k < choices.size() && pick[k] + 1 == choices[k].size())
    {
      pick[k] = 0;
      ++k;
    }
    if (k == choices.size())
    {
      break;
    }
    ++pick[k];
  }
  std::sort(id_tuples.begin(), id_tuples.end());

  std::vector<BidVector> out;
  out.reserve(id_tuples.size());
  for (auto const &ids : id_tuples)
  {
    BidVector r;
    for (auto id : ids)
    {
      r.Insert(id, b.at(id));
    }
    out.push_back(std::move(r));
  }
  return out;
}

/**
 * The canonical m-completion of `b` to `fill`: keep the m-restriction with
 * the lexicographically smallest id tuple and set every other bidder to
 * `fill`. That restriction takes, for each value, the smallest ids bidding it.
 */
inline BidVector Completion(BidVector const &b, BidMultiset const &m, Rational const &fill)
{
  if (!m.IsSubMultisetOf(BagOf(b)))
  {
    throw PreconditionError("not a sub-multiset: " + ToString(m) + " of " + ToString(BagOf(b)));
  }
  auto const by_bid = detail::IdsByBid(b);
  IdSet      kept;
  for (auto const &[value, count] : m.counts())
  {
    auto const &ids = by_bid.at(value);
    kept.insert(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(count));
  }
  BidVector out;
  for (auto const &[id, bid] : b)
  {
    out.Insert(id, kept.count(id) != 0 ? bid : fill);
  }
  return out;
}

/// One completion of `base` to `fill` per sub-multiset of `BagOf(base)`.
struct FullFamily
{
  BidVector                          base;
  Rational                           fill;
  std::map<BidMultiset, BidVector>   completions;

  /// The family as a set; coinciding completions collapse.
  BidVectorSet Members() const
  {
    BidVectorSet members;
    for (auto const &entry : completions)
    {
      members.insert(entry.second);
    }
    return members;
  }
};

inline FullFamily MakeFullFamily(BidVector const &base, Rational const &fill)
{
  FullFamily family{base, fill, {}};
  for (auto &m : SubMultisets(BagOf(base)))
  {
    auto completion = Completion(base, m, fill);
    family.completions.emplace(std::move(m), std::move(completion));
  }
  return family;
}

/// `pairs` united with each member of `family`. Domains must be disjoint.
inline BidVectorSet Extend(BidVector const &pairs, BidVectorSet const &family)
{
  BidVectorSet out;
  for (auto const &member : family)
  {
    BidVector joined = member;
    for (auto const &[id, bid] : pairs)
    {
      if (joined.contains(id))
      {
        throw PreconditionError("⇀ domain clash at bidder " + std::to_string(id.value));
      }
      joined.Insert(id, bid);
    }
    out.insert(std::move(joined));
  }
  return out;
}

/// Two ids outside `dom b`: max(dom b) + 1 and + 2, or 1 and 2 when empty.
inline std::pair<BidderId, BidderId> FreshIds(BidVector const &b)
{
  std::uint64_t const top = b.empty() ? 0 : std::prev(b.end())->first.value;
  return {BidderId{top + 1}, BidderId{top + 2}};
}

}  // namespace imbalance
