/*
 * Copyright (C) 2026 The resched authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#ifndef RESCHED__TYPES_HPP
#define RESCHED__TYPES_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace resched {

/// Planning days are integers counted from 0 (the day the disruption is
/// noticed).
using Day = int;

/// Quantities are whole pieces.
using Quantity = std::int64_t;

/// Weights and objective values. Integral so that solver and oracle agree
/// exactly.
using Weight = std::int64_t;

using AgentId = std::string;
using OrderId = std::string;

/// Sparse day -> quantity mapping. Zero entries are never stored.
using DayMap = std::map<Day, Quantity>;

/// Dense per-day series over the planning horizon.
using Series = std::vector<Quantity>;

//==============================================================================
/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Bad input: dangling references, out-of-range days, malformed files.
/// `where` is a JSON pointer when the input came from a document.
class InputError : public Error
{
public:
  InputError(std::string where, const std::string& what)
  : Error(where.empty() ? what : where + ": " + what),
    _where(std::move(where))
  {}

  const std::string& where() const { return _where; }

private:
  std::string _where;
};

/// The BOM contains a cycle.
class CycleError : public InputError
{
public:
  using InputError::InputError;
};

/// The initial schedule violates a supply, consumption or capacity
/// constraint.
class InfeasibleError : public Error
{
public:
  using Error::Error;
};

/// A local optimization problem is malformed or too large to enumerate.
class ProblemError : public Error
{
public:
  using Error::Error;
};

//==============================================================================
inline void add_to(DayMap& m, Day d, Quantity q)
{
  if (q == 0)
    return;
  auto& v = m[d];
  v += q;
  if (v == 0)
    m.erase(d);
}

inline Quantity total(const DayMap& m)
{
  Quantity t = 0;
  for (const auto& [d, q] : m)
    t += q;
  return t;
}

/// Quantities dated on or before `day`.
inline Quantity total_through(const DayMap& m, Day day)
{
  Quantity t = 0;
  for (const auto& [d, q] : m)
  {
    if (d > day)
      break;
    t += q;
  }
  return t;
}

/// Dense copy of `m` over [0, horizon). Entries outside are dropped.
inline Series to_series(const DayMap& m, Day horizon)
{
  Series s(static_cast<std::size_t>(horizon), 0);
  for (const auto& [d, q] : m)
    if (d >= 0 && d < horizon)
      s[static_cast<std::size_t>(d)] += q;
  return s;
}

inline DayMap to_day_map(const Series& s)
{
  DayMap m;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != 0)
      m[static_cast<Day>(i)] = s[i];
  return m;
}

inline Series cumulative(const Series& s)
{
  Series c(s.size(), 0);
  Quantity run = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
  {
    run += s[i];
    c[i] = run;
  }
  return c;
}

/// Inverse of cumulative(). Assumes `c` is non-decreasing.
inline Series increments(const Series& c)
{
  Series s(c.size(), 0);
  Quantity prev = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
  {
    s[i] = c[i] - prev;
    prev = c[i];
  }
  return s;
}

inline Quantity floor_div(Quantity a, Quantity b)
{
  Quantity q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0)))
    --q;
  return q;
}

} // namespace resched

#endif // RESCHED__TYPES_HPP
