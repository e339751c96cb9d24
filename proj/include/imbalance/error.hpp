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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace imbalance {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input. `position()` is the 0-based offset of the
/// offending character.
class ParseError : public Error
{
public:
  ParseError(std::string const &message, std::size_t position)
    : Error(message + " at position " + std::to_string(position))
    , position_(position)
  {}

  std::size_t position() const noexcept
  {
    return position_;
  }

private:
  std::size_t position_;
};

/// A price rule was evaluated outside the set of bid vectors it is defined on.
class RuleUndefined : public Error
{
public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error
{
public:
  using Error::Error;
};

}  // namespace imbalance
