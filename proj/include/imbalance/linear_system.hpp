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

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace imbalance {

/// One balance equation: sum of coefficient * P(variable) = rhs.
struct BalanceRow
{
  std::map<std::size_t, Rational> coefficients;
  Rational                        rhs;
  std::optional<BidVector>        origin;
};

/// Linear equations over the unknown payments P(m), one unknown per bag.
struct LinearSystem
{
  std::vector<BidMultiset> variables;
  std::vector<BalanceRow>  rows;

  /// Throws when a coefficient refers to a variable that does not exist.
  void Validate() const
  {
    for (std::size_t r = 0; r < rows.size(); ++r)
    {
      for (auto const &entry : rows[r].coefficients)
      {
        if (entry.first >= variables.size())
        {
          throw PreconditionError("row " + std::to_string(r) + " refers to variable " +
                                  std::to_string(entry.first) + " of " + std::to_string(variables.size()));
        }
      }
    }
  }
};

/// Rational row multipliers whose combination of the equations reads 0 = c
/// with c != 0.
struct Certificate
{
  std::vector<Rational> multipliers;
};

struct Feasible
{
  PaymentTable assignment;
  /// Bags whose payment is the same in every solution.
  std::set<BidMultiset> determined;
};

struct Infeasible
{
  Certificate certificate;
};

using SolveResult = std::variant<Feasible, Infeasible>;

/**
 * One equation `sum_{i in dom b} P(bag(b - i)) = rule(b)` per `b` in
 * `vectors`. Unknowns are the distinct bags that occur, in ascending bag
 * order; a coefficient counts the bidders whose removal yields that bag.
 */
inline LinearSystem BuildBalanceSystem(BidVectorSet const &vectors, PriceRule const &rule)
{
  std::vector<std::map<BidMultiset, std::size_t>> counts;
  std::set<BidMultiset>                           bags;
  LinearSystem                                    system;
  for (auto const &b : vectors)
  {
    if (b.empty())
    {
      throw PreconditionError("balance equation needs a nonempty bid vector");
    }
    Rational rhs;
    try
    {
      rhs = rule(b);
    }
    catch (RuleUndefined const &e)
    {
      throw RuleUndefined(std::string(e.what()) + " (at " + ToString(b) + ")");
    }
    BidMultiset const bag = BagOf(b);
    std::map<BidMultiset, std::size_t> row;
    for (auto const &entry : b)
    {
      BidMultiset rest = bag;
      rest.RemoveOne(entry.second);
      bags.insert(rest);
      ++row[rest];
    }
    counts.push_back(std::move(row));
    system.rows.push_back({{}, std::move(rhs), b});
  }

  system.variables.assign(bags.begin(), bags.end());
  std::map<BidMultiset, std::size_t> index;
  for (std::size_t k = 0; k < system.variables.size(); ++k)
  {
    index.emplace(system.variables[k], k);
  }
  for (std::size_t r = 0; r < counts.size(); ++r)
  {
    for (auto const &[bag, count] : counts[r])
    {
      system.rows[r].coefficients.emplace(index.at(bag), Rational(count));
    }
  }
  return system;
}

namespace detail {

using SparseRow = std::map<std::size_t, Rational>;

// target -= factor * source, dropping entries that cancel.
inline void Axpy(SparseRow &target, Rational const &factor, SparseRow const &source)
{
  for (auto const &[k, v] : source)
  {
    auto it = target.find(k);
    if (it == target.end())
    {
      target.emplace(k, -(factor * v));
    }
    else
    {
      it->second -= factor * v;
      if (it->second.is_zero())
      {
        target.erase(it);
      }
    }
  }
}

}  // namespace detail

/**
 * Exact Gauss-Jordan elimination. Pivots are the first remaining row with a
 * nonzero entry in each column, columns taken in variable order. Each
 * working row carries the combination of original rows it represents, so
 * the first reduced row reading 0 = c (c != 0) yields the certificate.
 * Feasible systems get a solution with every free variable at zero.
 */
inline SolveResult SolveOrRefute(LinearSystem const &system)
{
  system.Validate();

  struct Working
  {
    detail::SparseRow coefficients;
    Rational          rhs;
    detail::SparseRow combination;
  };
  std::vector<Working> rows;
  rows.reserve(system.rows.size());
  for (std::size_t r = 0; r < system.rows.size(); ++r)
  {
    Working w{{}, system.rows[r].rhs, {{r, Rational{1}}}};
    for (auto const &[k, v] : system.rows[r].coefficients)
    {
      if (!v.is_zero())
      {
        w.coefficients.emplace(k, v);
      }
    }
    rows.push_back(std::move(w));
  }

  std::vector<bool>                       is_pivot(rows.size(), false);
  std::vector<std::optional<std::size_t>> pivot_row(system.variables.size());
  for (std::size_t col = 0; col < system.variables.size(); ++col)
  {
    std::optional<std::size_t> chosen;
    for (std::size_t r = 0; r < rows.size(); ++r)
    {
      if (!is_pivot[r] && rows[r].coefficients.count(col) != 0)
      {
        chosen = r;
        break;
      }
    }
    if (!chosen)
    {
      continue;
    }
    Working &pivot = rows[*chosen];
    Rational const scale = Rational{1} / pivot.coefficients.at(col);
    for (auto &entry : pivot.coefficients)
    {
      entry.second *= scale;
    }
    pivot.rhs *= scale;
    for (auto &entry : pivot.combination)
    {
      entry.second *= scale;
    }
    is_pivot[*chosen] = true;
    pivot_row[col]    = *chosen;

    for (std::size_t r = 0; r < rows.size(); ++r)
    {
      if (r == *chosen)
      {
        continue;
      }
      auto it = rows[r].coefficients.find(col);
      if (it == rows[r].coefficients.end())
      {
        continue;
      }
      Rational const factor = it->second;
      detail::Axpy(rows[r].coefficients, factor, pivot.coefficients);
      rows[r].rhs -= factor * pivot.rhs;
      detail::Axpy(rows[r].combination, factor, pivot.combination);
    }
  }

  for (std::size_t r = 0; r < rows.size(); ++r)
  {
    if (!is_pivot[r] && !rows[r].rhs.is_zero())
    {
      Certificate cert;
      cert.multipliers.assign(system.rows.size(), Rational{});
      for (auto const &[k, v] : rows[r].combination)
      {
        cert.multipliers[k] = v;
      }
      return Infeasible{std::move(cert)};
    }
  }

  Feasible feasible;
  for (std::size_t col = 0; col < system.variables.size(); ++col)
  {
    if (!pivot_row[col])
    {
      feasible.assignment.Set(system.variables[col], Rational{});
      continue;
    }
    Working const &row = rows[*pivot_row[col]];
    feasible.assignment.Set(system.variables[col], row.rhs);
    if (row.coefficients.size() == 1)
    {
      feasible.determined.insert(system.variables[col]);
    }
  }
  return feasible;
}

/**
 * Exact check of a refutation: the multiplier-weighted sum of coefficient
 * rows vanishes and the weighted sum of right-hand sides does not.
 */
inline bool VerifyCertificate(LinearSystem const &system, Certificate const &cert)
{
  if (cert.multipliers.size() != system.rows.size())
  {
    throw PreconditionError("certificate has " + std::to_string(cert.multipliers.size()) + " multipliers for " +
                            std::to_string(system.rows.size()) + " rows");
  }
  system.Validate();
  std::vector<Rational> combined(system.variables.size());
  Rational              rhs;
  for (std::size_t r = 0; r < system.rows.size(); ++r)
  {
    Rational const &y = cert.multipliers[r];
    if (y.is_zero())
    {
      continue;
    }
    for (auto const &[k, v] : system.rows[r].coefficients)
    {
      combined[k] += y * v;
    }
    rhs += y * system.rows[r].rhs;
  }
  for (auto const &c : combined)
  {
    if (!c.is_zero())
    {
      return false;
    }
  }
  return !rhs.is_zero();
}

/// True iff `assignment` satisfies every row exactly.
inline bool SatisfiesAll(LinearSystem const &system, PaymentTable const &assignment)
{
  for (auto const &row : system.rows)
  {
    Rational lhs;
    for (auto const &[k, v] : row.coefficients)
    {
      lhs += v * assignment.at(system.variables.at(k));
    }
    if (lhs != row.rhs)
    {
      return false;
    }
  }
  return true;
}

}  // namespace imbalance
