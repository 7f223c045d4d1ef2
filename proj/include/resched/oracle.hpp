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

#ifndef RESCHED__ORACLE_HPP
#define RESCHED__ORACLE_HPP

#include <resched/optimizers.hpp>

#include <cstdint>
#include <functional>
#include <optional>

namespace resched {

/// Exhaustive enumeration of every feasible integer solution. Only meant for
/// small instances; the search gives up with ProblemError after `max_nodes`
/// visited nodes.
struct OracleLimits
{
  std::uint64_t max_nodes = 10'000'000;
};

//==============================================================================
inline Allocation brute_force_oracle(
  const AllocationProblem& p,
  const WeightConfig& w = {},
  OracleLimits limits = {})
{
  validate(p);
  w.validate(p.horizon);

  const auto M = p.orders.size();
  const auto N = static_cast<std::size_t>(p.horizon);
  const bool per_day = p.mode == AllocationMode::capacity;

  std::vector<Series> d(M), cum_d(M);
  std::vector<Quantity> d_total(M, 0);
  for (std::size_t m = 0; m < M; ++m)
  {
    d[m] = to_series(p.orders[m].demand, p.horizon);
    cum_d[m] = cumulative(d[m]);
    d_total[m] = cum_d[m].empty() ? 0 : cum_d[m].back();
  }
  const Series s = to_series(p.supply, p.horizon);

  // Variable (m, n) in day-major order. All-or-nothing only delivers on
  // demand days and never more than that day's demand.
  auto upper = [&](std::size_t m, std::size_t n) -> Quantity
    {
      if (p.mode == AllocationMode::all_or_nothing)
        return d[m][n];
      return d_total[m];
    };

  std::vector<Series> x(M, Series(N, 0));
  std::vector<Quantity> used(M, 0);
  std::optional<Weight> best;
  std::map<OrderId, DayMap> best_x;
  std::uint64_t nodes = 0;
  Quantity supply_cum = 0;
  Quantity alloc_cum = 0;

  auto snapshot = [&]()
    {
      std::map<OrderId, DayMap> out;
      for (std::size_t m = 0; m < M; ++m)
      {
        auto dm = to_day_map(x[m]);
        if (!dm.empty())
          out[p.orders[m].id] = std::move(dm);
      }
      return out;
    };

  std::function<void(std::size_t, std::size_t, Quantity)> visit =
    [&](std::size_t n, std::size_t m, Quantity day_alloc)
    {
      if (++nodes > limits.max_nodes)
        throw ProblemError("instance too large for exhaustive enumeration");

      if (m == M)
      {
        // Close the day: check its supply constraint.
        if (per_day)
        {
          if (day_alloc > s[n])
            return;
        }
        else if (alloc_cum + day_alloc > supply_cum + s[n])
        {
          return;
        }

        const Quantity saved_supply = supply_cum;
        const Quantity saved_alloc = alloc_cum;
        supply_cum += s[n];
        alloc_cum += day_alloc;
        if (n + 1 == N)
        {
          auto xm = snapshot();
          const Weight obj = evaluate(p, w, xm);
          if (!best || obj > *best)
          {
            best = obj;
            best_x = std::move(xm);
          }
        }
        else
        {
          visit(n + 1, 0, 0);
        }
        supply_cum = saved_supply;
        alloc_cum = saved_alloc;
        return;
      }

      Quantity hi = std::min(upper(m, n), d_total[m] - used[m]);
      if (p.no_early_delivery)
        hi = std::min(hi, cum_d[m][n] - used[m]);
      for (Quantity q = 0; q <= hi; ++q)
      {
        // Allocation already beyond any supply this day can reach: larger q
        // only gets worse.
        if (per_day ? day_alloc + q > s[n]
                    : alloc_cum + day_alloc + q > supply_cum + s[n])
          break;
        x[m][n] = q;
        used[m] += q;
        visit(n, m + 1, day_alloc + q);
        used[m] -= q;
      }
      x[m][n] = 0;
    };

  if (N > 0)
    visit(0, 0, 0);

  Allocation out;
  out.x = std::move(best_x);
  out.objective = best.value_or(0);
  return out;
}

//==============================================================================
inline ReductionPlan brute_force_oracle(
  const ReductionProblem& p,
  OracleLimits limits = {})
{
  validate(p);
  const auto N = static_cast<std::size_t>(p.horizon);

  std::vector<Series> cum_q;
  Quantity qmax = 0;
  for (const auto& req : p.requests)
  {
    cum_q.push_back(cumulative(to_series(req.q, p.horizon)));
    qmax = std::max(qmax, cum_q.back().back());
  }

  // An optimum never reduces more in total than the largest single request:
  // trimming the last positive r_n of a plan above that keeps it feasible
  // and lowers the objective.
  Series r(N, 0);
  std::optional<Weight> best;
  DayMap best_r;
  std::uint64_t nodes = 0;

  std::function<void(std::size_t, Quantity)> visit =
    [&](std::size_t n, Quantity cum)
    {
      if (++nodes > limits.max_nodes)
        throw ProblemError("instance too large for exhaustive enumeration");
      if (n == N)
      {
        const DayMap rm = to_day_map(r);
        const Weight obj = evaluate(p, rm);
        if (!best || obj < *best)
        {
          best = obj;
          best_r = rm;
        }
        return;
      }
      for (Quantity v = 0; cum + v <= qmax; ++v)
      {
        r[n] = v;
        bool ok = true;
        for (const auto& c : cum_q)
          ok = ok && cum + v >= c[n];
        if (ok)
          visit(n + 1, cum + v);
      }
      r[n] = 0;
    };

  visit(0, 0);

  ReductionPlan out;
  out.r = std::move(best_r);
  out.objective = best.value_or(0);
  return out;
}

} // namespace resched

#endif // RESCHED__ORACLE_HPP
