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

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <concepts>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace imbalance {

using Integer = boost::multiprecision::cpp_int;

/**
 * Exact rational number with arbitrary-precision numerator and denominator.
 *
 * Every instance is kept in lowest terms with a strictly positive
 * denominator, so structural equality coincides with numeric equality and
 * the value can be used directly as an ordered map key.
 */
class Rational
{
public:
  Rational() = default;

  template <std::integral T>
  Rational(T value)  // NOLINT(google-explicit-constructor)
    : num_(value)
  {}

  explicit Rational(Integer value)
    : num_(std::move(value))
  {}

  Rational(Integer num, Integer den)
    : num_(std::move(num))
    , den_(std::move(den))
  {
    Normalize();
  }

  /// Text form: `[-]digits` or `[-]digits/digits`.
  static Rational Parse(std::string_view text);

  Integer const &numerator() const noexcept
  {
    return num_;
  }

  Integer const &denominator() const noexcept
  {
    return den_;
  }

  int sign() const noexcept
  {
    return num_.sign();
  }

  bool is_zero() const noexcept
  {
    return num_.is_zero();
  }

  bool is_integer() const noexcept
  {
    return den_ == 1;
  }

  /// `p/q` in lowest terms, `p` alone when the denominator is one.
  std::string ToString() const
  {
    std::string out = num_.str();
    if (den_ != 1)
    {
      out += '/';
      out += den_.str();
    }
    return out;
  }

  Rational operator-() const
  {
    Rational r = *this;
    r.num_     = -r.num_;
    return r;
  }

  Rational &operator+=(Rational const &o)
  {
    if (den_ == o.den_)
    {
      num_ += o.num_;
    }
    else
    {
      num_ = num_ * o.den_ + o.num_ * den_;
      den_ *= o.den_;
    }
    Normalize();
    return *this;
  }

  Rational &operator-=(Rational const &o)
  {
    return *this += -o;
  }

  Rational &operator*=(Rational const &o)
  {
    num_ *= o.num_;
    den_ *= o.den_;
    Normalize();
    return *this;
  }

  Rational &operator/=(Rational const &o)
  {
    if (o.is_zero())
    {
      throw Error("division by zero");
    }
    Integer const num = num_ * o.den_;
    Integer const den = den_ * o.num_;
    num_              = num;
    den_              = den;
    Normalize();
    return *this;
  }

  friend Rational operator+(Rational a, Rational const &b)
  {
    return a += b;
  }

  friend Rational operator-(Rational a, Rational const &b)
  {
    return a -= b;
  }

  friend Rational operator*(Rational a, Rational const &b)
  {
    return a *= b;
  }

  friend Rational operator/(Rational a, Rational const &b)
  {
    return a /= b;
  }

  friend bool operator==(Rational const &a, Rational const &b)
  {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend std::strong_ordering operator<=>(Rational const &a, Rational const &b)
  {
    if (a.den_ == b.den_)
    {
      return Compare(a.num_, b.num_);
    }
    return Compare(a.num_ * b.den_, b.num_ * a.den_);
  }

  friend std::ostream &operator<<(std::ostream &os, Rational const &r)
  {
    return os << r.ToString();
  }

private:
  static std::strong_ordering Compare(Integer const &a, Integer const &b)
  {
    int const c = a.compare(b);
    if (c < 0)
    {
      return std::strong_ordering::less;
    }
    if (c > 0)
    {
      return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
  }

  void Normalize()
  {
    if (den_.is_zero())
    {
      throw Error("zero denominator");
    }
    if (den_.sign() < 0)
    {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_.is_zero())
    {
      den_ = 1;
      return;
    }
    Integer const g = gcd(num_, den_);
    if (g != 1)
    {
      num_ /= g;
      den_ /= g;
    }
  }

  Integer num_{0};
  Integer den_{1};
};

inline Rational Rational::Parse(std::string_view text)
{
  std::size_t pos = 0;

  auto read_digits = [&](bool allow_sign) {
    bool negative = false;
    if (allow_sign && pos < text.size() && text[pos] == '-')
    {
      negative = true;
      ++pos;
    }
    std::size_t const digits_start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
    {
      ++pos;
    }
    if (pos == digits_start)
    {
      throw ParseError("expected digit in rational '" + std::string(text) + "'", pos);
    }
    Integer value(std::string(text.substr(digits_start, pos - digits_start)));
    return negative ? Integer(-value) : value;
  };

  Integer num = read_digits(true);
  Integer den = 1;
  if (pos < text.size() && text[pos] == '/')
  {
    ++pos;
    std::size_t const den_pos = pos;
    den                       = read_digits(false);
    if (den.is_zero())
    {
      throw ParseError("zero denominator", den_pos);
    }
  }
  if (pos != text.size())
  {
    throw ParseError("unexpected character in rational '" + std::string(text) + "'", pos);
  }
  return {std::move(num), std::move(den)};
}

/// Checked constructor: `num/den` normalized. Throws on a zero denominator.
inline Rational MakeRational(Integer num, Integer den)
{
  return {std::move(num), std::move(den)};
}

}  // namespace imbalance
