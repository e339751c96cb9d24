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
#include "imbalance/linear_system.hpp"
#include "imbalance/payment.hpp"
#include "imbalance/rational.hpp"
#include "imbalance/witness.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

// JSON encodings. Rationals are always strings "p/q" ("p" for integers);
// objects keep insertion order so that output is canonical and stable.

namespace imbalance::json {

using Json = nlohmann::ordered_json;

inline Json ToJson(Rational const &r)
{
  return r.ToString();
}

inline Rational RationalFromJson(Json const &j)
{
  if (j.is_string())
  {
    return Rational::Parse(j.get<std::string>());
  }
  if (j.is_number_integer())
  {
    return Rational(j.get<std::int64_t>());
  }
  throw Error("expected a rational string, got " + j.dump());
}

inline BidderId BidderIdFromKey(std::string const &key)
{
  if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos)
  {
    throw ParseError("bidder id must be a non-negative integer: '" + key + "'",
                     key.empty() ? 0 : key.find_first_not_of("0123456789"));
  }
  return BidderId{std::stoull(key)};
}

/// `{"bids": {"<id>": "<p/q>", ...}}`
inline Json ToJson(BidVector const &b)
{
  Json bids = Json::object();
  for (auto const &[id, bid] : b)
  {
    bids[std::to_string(id.value)] = bid.ToString();
  }
  return Json{{"bids", bids}};
}

inline BidVector BidVectorFromJson(Json const &j)
{
  if (!j.is_object() || !j.contains("bids") || !j.at("bids").is_object())
  {
    throw Error("bid vector must be an object with a \"bids\" object");
  }
  BidVector b;
  for (auto const &[key, value] : j.at("bids").items())
  {
    b.Insert(BidderIdFromKey(key), RationalFromJson(value));
  }
  return b;
}

/// Ascending array of "p/q" strings, repeated by multiplicity.
inline Json ToJson(BidMultiset const &m)
{
  Json out = Json::array();
  for (auto const &v : m.Elements())
  {
    out.push_back(v.ToString());
  }
  return out;
}

inline BidMultiset BidMultisetFromJson(Json const &j)
{
  if (!j.is_array())
  {
    throw Error("multiset must be an array");
  }
  BidMultiset m;
  for (auto const &v : j)
  {
    m.Add(RationalFromJson(v));
  }
  return m;
}

/// `{"vectors": [<bid vector>, ...]}` in canonical set order.
inline Json ToJson(BidVectorSet const &vectors)
{
  Json list = Json::array();
  for (auto const &b : vectors)
  {
    list.push_back(ToJson(b));
  }
  return Json{{"vectors", list}};
}

/// Accepts `{"vectors": [...]}` or a bare array of bid vectors.
inline BidVectorSet BidVectorSetFromJson(Json const &j)
{
  Json const &list = j.is_object() && j.contains("vectors") ? j.at("vectors") : j;
  if (!list.is_array())
  {
    throw Error("witness file must hold an array of bid vectors");
  }
  BidVectorSet vectors;
  for (auto const &item : list)
  {
    vectors.insert(BidVectorFromJson(item));
  }
  return vectors;
}

/// `[{"multiset": [...], "value": "p/q"}, ...]` sorted by multiset.
inline Json ToJson(PaymentTable const &table)
{
  Json out = Json::array();
  for (auto const &[bag, value] : table)
  {
    out.push_back(Json{{"multiset", ToJson(bag)}, {"value", value.ToString()}});
  }
  return out;
}

inline PaymentTable PaymentTableFromJson(Json const &j)
{
  if (!j.is_array())
  {
    throw Error("payment table must be an array");
  }
  PaymentTable table;
  for (auto const &entry : j)
  {
    table.Set(BidMultisetFromJson(entry.at("multiset")), RationalFromJson(entry.at("value")));
  }
  return table;
}

inline Json ToJson(Certificate const &cert)
{
  Json multipliers = Json::array();
  for (auto const &y : cert.multipliers)
  {
    multipliers.push_back(y.ToString());
  }
  return Json{{"multipliers", multipliers}};
}

inline Certificate CertificateFromJson(Json const &j)
{
  Certificate cert;
  for (auto const &y : j.at("multipliers"))
  {
    cert.multipliers.push_back(RationalFromJson(y));
  }
  return cert;
}

/// `{"variables": [[...]], "rows": [{"coeffs": {"<index>": "p/q"}, "rhs": "p/q", "origin": {...}}]}`
inline Json ToJson(LinearSystem const &system)
{
  Json variables = Json::array();
  for (auto const &v : system.variables)
  {
    variables.push_back(ToJson(v));
  }
  Json rows = Json::array();
  for (auto const &row : system.rows)
  {
    Json coeffs = Json::object();
    for (auto const &[k, v] : row.coefficients)
    {
      coeffs[std::to_string(k)] = v.ToString();
    }
    Json entry{{"coeffs", coeffs}, {"rhs", row.rhs.ToString()}};
    if (row.origin)
    {
      entry["origin"] = ToJson(*row.origin);
    }
    rows.push_back(std::move(entry));
  }
  return Json{{"variables", variables}, {"rows", rows}};
}

/// `origin` is optional on input.
inline LinearSystem LinearSystemFromJson(Json const &j)
{
  LinearSystem system;
  for (auto const &v : j.at("variables"))
  {
    system.variables.push_back(BidMultisetFromJson(v));
  }
  for (auto const &entry : j.at("rows"))
  {
    BalanceRow row;
    for (auto const &[key, value] : entry.at("coeffs").items())
    {
      row.coefficients.emplace(static_cast<std::size_t>(BidderIdFromKey(key).value), RationalFromJson(value));
    }
    row.rhs = RationalFromJson(entry.at("rhs"));
    if (entry.contains("origin"))
    {
      row.origin = BidVectorFromJson(entry.at("origin"));
    }
    system.rows.push_back(std::move(row));
  }
  system.Validate();
  return system;
}

inline Json ToJson(std::map<BidderId, Rational> const &by_bidder)
{
  Json out = Json::object();
  for (auto const &[id, value] : by_bidder)
  {
    out[std::to_string(id.value)] = value.ToString();
  }
  return out;
}

inline Json ToJson(TheoremReport const &report)
{
  Json hypotheses = Json::array();
  for (auto const &h : report.hypotheses)
  {
    hypotheses.push_back(Json{{"name", h.name}, {"pass", h.pass}, {"detail", h.detail}});
  }
  Json out;
  out["lhs"]          = report.lhs ? Json(report.lhs->ToString()) : Json(nullptr);
  out["rhs"]          = report.rhs ? Json(report.rhs->ToString()) : Json(nullptr);
  out["holds"]        = report.holds ? Json(*report.holds) : Json(nullptr);
  out["eta_low"]      = ToJson(report.eta_low);
  out["eta_high"]     = ToJson(report.eta_high);
  out["witness_size"] = report.witness_set.size();
  out["hypotheses"]   = hypotheses;
  return out;
}

}  // namespace imbalance::json
