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

#ifndef RESCHED__OPTIMIZERS_HPP
#define RESCHED__OPTIMIZERS_HPP

#include <resched/types.hpp>

#include <algorithm>
#include <limits>
#include <set>
#include <string>
#include <vector>

namespace resched {

//==============================================================================
enum class AllocationMode
{
  /// Supplier allocation; orders may be filled partially or late.
  partial,

  /// Supplier allocation; each (order, demand day) is delivered in full on
  /// its day or dropped.
  all_or_nothing,

  /// Capacity agent allocation; supply is per-day and does not carry over.
  capacity
};

inline const char* to_string(AllocationMode m)
{
  switch (m)
  {
    case AllocationMode::partial: return "partial";
    case AllocationMode::all_or_nothing: return "all_or_nothing";
    case AllocationMode::capacity: return "capacity";
  }
  return "?";
}

inline AllocationMode allocation_mode_from_string(const std::string& s)
{
  if (s == "partial")
    return AllocationMode::partial;
  if (s == "all_or_nothing")
    return AllocationMode::all_or_nothing;
  if (s == "capacity")
    return AllocationMode::capacity;
  throw InputError("", "unknown allocation mode '" + s + "'");
}

//==============================================================================
/// Weights of the local objectives. Empty members fall back to the defaults:
/// priority weight equal to the priority, fulfillment weight 1, adherence
/// weight 2 * (largest single-day demand) * fulfillment weight, and day
/// attenuation N - n.
struct WeightConfig
{
  std::map<int, Weight> priority_weight;
  std::map<OrderId, Weight> fulfillment_weight;
  std::map<OrderId, Weight> adherence_weight;
  std::vector<Weight> day_attenuation;

  Weight priority(int p) const
  {
    if (priority_weight.empty())
      return p;
    const auto it = priority_weight.find(p);
    if (it == priority_weight.end())
      throw ProblemError("no priority weight for priority " + std::to_string(p));
    return it->second;
  }

  Weight fulfillment(const OrderId& id) const
  {
    const auto it = fulfillment_weight.find(id);
    return it == fulfillment_weight.end() ? 1 : it->second;
  }

  Weight adherence(const OrderId& id, Quantity max_demand) const
  {
    const auto it = adherence_weight.find(id);
    if (it != adherence_weight.end())
      return it->second;
    return 2 * std::max<Quantity>(max_demand, 1) * fulfillment(id);
  }

  Weight day(Day n, Day horizon) const
  {
    if (day_attenuation.empty())
      return horizon - n;
    return day_attenuation.at(static_cast<std::size_t>(n));
  }

  void validate(Day horizon) const
  {
    const Weight* prev = nullptr;
    for (const auto& [p, w] : priority_weight)
    {
      if (prev && !(w > *prev))
        throw ProblemError("priority weights must increase strictly with priority");
      prev = &w;
    }
    for (const auto& [id, f] : fulfillment_weight)
      if (f <= 0)
        throw ProblemError("fulfillment weight of " + id + " must be positive");
    for (const auto& [id, l] : adherence_weight)
      if (l <= 0)
        throw ProblemError("adherence weight of " + id + " must be positive");
    if (!day_attenuation.empty())
    {
      if (day_attenuation.size() < static_cast<std::size_t>(horizon))
        throw ProblemError("day attenuation shorter than the horizon");
      for (std::size_t n = 0; n < static_cast<std::size_t>(horizon); ++n)
      {
        if (day_attenuation[n] <= 0)
          throw ProblemError("day attenuation must be positive");
        if (n > 0 && !(day_attenuation[n - 1] > day_attenuation[n]))
          throw ProblemError("day attenuation must decrease strictly");
      }
    }
  }
};

//==============================================================================
struct AllocationOrder
{
  OrderId id;
  DayMap demand;
  int priority = 1;
};

struct AllocationProblem
{
  std::vector<AllocationOrder> orders;

  /// s_n. Cumulative semantics for partial and all_or_nothing, per-day for
  /// capacity.
  DayMap supply;

  Day horizon = 0;
  AllocationMode mode = AllocationMode::partial;

  /// When set, an order's cumulative allocation may never run ahead of its
  /// cumulative demand. The negotiation engine always sets this so that
  /// schedules only move later.
  bool no_early_delivery = false;
};

struct Allocation
{
  std::map<OrderId, DayMap> x;
  Weight objective = 0;

  Quantity allocated(const OrderId& id) const
  {
    const auto it = x.find(id);
    return it == x.end() ? 0 : total(it->second);
  }

  bool operator==(const Allocation&) const = default;
};

/// Throws ProblemError on negative quantities, days outside [0, horizon),
/// duplicate order ids or non-positive priorities.
inline void validate(const AllocationProblem& p)
{
  if (p.horizon <= 0)
    throw ProblemError("horizon must be positive");
  std::set<OrderId> seen;
  for (const auto& o : p.orders)
  {
    if (!seen.insert(o.id).second)
      throw ProblemError("duplicate order id " + o.id);
    if (o.priority <= 0)
      throw ProblemError("order " + o.id + " has non-positive priority");
    for (const auto& [d, q] : o.demand)
    {
      if (d < 0 || d >= p.horizon)
        throw ProblemError("order " + o.id + " demand day " + std::to_string(d)
                           + " outside horizon");
      if (q < 0)
        throw ProblemError("order " + o.id + " has negative demand");
    }
  }
  for (const auto& [d, q] : p.supply)
  {
    if (d < 0 || d >= p.horizon)
      throw ProblemError("supply day " + std::to_string(d) + " outside horizon");
    if (q < 0)
      throw ProblemError("negative supply on day " + std::to_string(d));
  }
}

/// Largest single (order, day) demand; the scale of the default adherence
/// weight.
inline Quantity max_demand(const AllocationProblem& p)
{
  Quantity m = 0;
  for (const auto& o : p.orders)
    for (const auto& [d, q] : o.demand)
      m = std::max(m, q);
  return m;
}

/// Objective of `x` under the problem's mode, evaluated term by term.
inline Weight evaluate(
  const AllocationProblem& p,
  const WeightConfig& w,
  const std::map<OrderId, DayMap>& x)
{
  const Quantity dmax = max_demand(p);
  Weight obj = 0;
  for (const auto& o : p.orders)
  {
    const auto it = x.find(o.id);
    if (it == x.end())
      continue;
    for (const auto& [n, q] : it->second)
    {
      switch (p.mode)
      {
        case AllocationMode::partial:
          obj += w.priority(o.priority) * q;
          break;
        case AllocationMode::all_or_nothing:
        {
          const auto dit = o.demand.find(n);
          const Quantity d = dit == o.demand.end() ? 0 : dit->second;
          obj += w.fulfillment(o.id) * q
            + w.adherence(o.id, dmax) * q * (q - d);
          break;
        }
        case AllocationMode::capacity:
          obj += q;
          break;
      }
    }
  }
  return obj;
}

namespace detail {

/// Orders sorted by descending weight, then ascending id.
inline std::vector<std::size_t> by_weight_then_id(
  const AllocationProblem& p,
  const WeightConfig& w)
{
  std::vector<std::size_t> idx(p.orders.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b)
    {
      const Weight wa = w.priority(p.orders[a].priority);
      const Weight wb = w.priority(p.orders[b].priority);
      if (wa != wb)
        return wa > wb;
      return p.orders[a].id < p.orders[b].id;
    });
  return idx;
}

inline void require_mode(const AllocationProblem& p, AllocationMode m)
{
  if (p.mode != m)
    throw ProblemError(std::string("expected a ") + to_string(m)
                       + " problem, got " + to_string(p.mode));
}

} // namespace detail

//==============================================================================
/// Maximizes sum W_m * x_mn under per-order demand and cumulative supply
/// constraints.
///
/// The objective only depends on order totals and the set of feasible totals
/// is {X_m <= D_m, sum X_m <= S_{N-1}}, so filling orders by descending
/// weight is optimal. Deliveries are then placed day by day, each unit as
/// early as the cumulative supply allows, higher weight first and lower id on
/// ties.
inline Allocation solve_partial(
  const AllocationProblem& p,
  const WeightConfig& w = {})
{
  detail::require_mode(p, AllocationMode::partial);
  validate(p);
  w.validate(p.horizon);

  const auto N = static_cast<std::size_t>(p.horizon);
  const Series cum_supply = cumulative(to_series(p.supply, p.horizon));
  const auto order = detail::by_weight_then_id(p, w);

  std::vector<Quantity> target(p.orders.size(), 0);
  Quantity remaining = cum_supply.back();
  for (const auto i : order)
  {
    target[i] = std::min(total(p.orders[i].demand), remaining);
    remaining -= target[i];
  }

  // Supply usable by day n without starving a later cumulative constraint.
  Series usable(N, 0);
  Quantity run = std::numeric_limits<Quantity>::max();
  for (std::size_t n = N; n-- > 0;)
  {
    run = std::min(run, cum_supply[n]);
    usable[n] = run;
  }

  std::vector<Series> cum_demand;
  cum_demand.reserve(p.orders.size());
  for (const auto& o : p.orders)
    cum_demand.push_back(cumulative(to_series(o.demand, p.horizon)));

  Allocation result;
  std::vector<Quantity> given(p.orders.size(), 0);
  Quantity delivered = 0;
  for (std::size_t n = 0; n < N; ++n)
  {
    for (const auto i : order)
    {
      Quantity q = std::min(target[i] - given[i], usable[n] - delivered);
      if (p.no_early_delivery)
        q = std::min(q, cum_demand[i][n] - given[i]);
      if (q <= 0)
        continue;
      result.x[p.orders[i].id][static_cast<Day>(n)] = q;
      given[i] += q;
      delivered += q;
    }
  }

  result.objective = evaluate(p, w, result.x);
  return result;
}

//==============================================================================
/// Maximizes sum F_m * x_mn + L_m * x_mn * (x_mn - d_mn) under the same
/// constraints as solve_partial(). Deliveries are only made on demand days
/// (x_mn <= d_mn), which is what the adherence term protects.
///
/// Exact dynamic program over the decision variables ordered by (day,
/// descending weight, id), with the running cumulative allocation as state.
/// Among optimal solutions the one allocating the most to the earliest
/// variable wins.
inline Allocation solve_all_or_nothing(
  const AllocationProblem& p,
  const WeightConfig& w = {})
{
  detail::require_mode(p, AllocationMode::all_or_nothing);
  validate(p);
  w.validate(p.horizon);
  for (const auto& o : p.orders)
  {
    if (w.fulfillment(o.id) <= 0)
      throw ProblemError("fulfillment weight must be positive");
  }

  const Series cum_supply = cumulative(to_series(p.supply, p.horizon));
  const Quantity dmax = max_demand(p);
  const auto rank = detail::by_weight_then_id(p, w);

  struct Var
  {
    std::size_t order;
    Day day;
    Quantity demand;
    Weight f;
    Weight l;
  };

  std::vector<Var> vars;
  for (Day n = 0; n < p.horizon; ++n)
  {
    for (const auto i : rank)
    {
      const auto& o = p.orders[i];
      const auto it = o.demand.find(n);
      if (it == o.demand.end() || it->second == 0)
        continue;
      vars.push_back({i, n, it->second, w.fulfillment(o.id),
                      w.adherence(o.id, dmax)});
    }
  }

  Quantity total_demand = 0;
  for (const auto& v : vars)
    total_demand += v.demand;
  const Quantity cap = std::min(total_demand, cum_supply.back());
  const auto states = static_cast<std::size_t>(cap + 1);

  constexpr Weight unreachable = std::numeric_limits<Weight>::min();
  auto gain = [](const Var& v, Quantity x) { return v.f * x + v.l * x * (x - v.demand); };

  // best[k][c]: optimum over vars k.. given cumulative allocation c so far.
  std::vector<std::vector<Weight>> best(
    vars.size() + 1, std::vector<Weight>(states, 0));
  for (std::size_t k = vars.size(); k-- > 0;)
  {
    const auto& v = vars[k];
    const Quantity limit = std::min(cap, cum_supply[static_cast<std::size_t>(v.day)]);
    for (std::size_t c = 0; c < states; ++c)
    {
      Weight b = unreachable;
      const auto cq = static_cast<Quantity>(c);
      for (Quantity x = 0; x <= v.demand && cq + x <= limit; ++x)
      {
        const Weight tail = best[k + 1][c + static_cast<std::size_t>(x)];
        if (tail == unreachable)
          continue;
        b = std::max(b, gain(v, x) + tail);
      }
      best[k][c] = b;
    }
  }

  Allocation result;
  std::size_t c = 0;
  for (std::size_t k = 0; k < vars.size(); ++k)
  {
    const auto& v = vars[k];
    const Quantity limit = std::min(cap, cum_supply[static_cast<std::size_t>(v.day)]);
    const auto cq = static_cast<Quantity>(c);
    for (Quantity x = std::min(v.demand, limit - cq); x >= 0; --x)
    {
      const Weight tail = best[k + 1][c + static_cast<std::size_t>(x)];
      if (tail == unreachable || gain(v, x) + tail != best[k][c])
        continue;
      if (x > 0)
        result.x[p.orders[v.order].id][v.day] = x;
      c += static_cast<std::size_t>(x);
      break;
    }
  }

  result.objective = evaluate(p, w, result.x);
  return result;
}

//==============================================================================
/// Maximizes the total quantity produced under per-day capacity and per-order
/// demand. Work-conserving day-by-day fill is optimal because every order
/// shares the horizon end as its deadline; within a day, higher priority
/// goes first, then lower id.
inline Allocation solve_capacity(const AllocationProblem& p)
{
  detail::require_mode(p, AllocationMode::capacity);
  validate(p);

  const auto N = static_cast<std::size_t>(p.horizon);
  const Series capacity = to_series(p.supply, p.horizon);

  std::vector<std::size_t> order(p.orders.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
    {
      if (p.orders[a].priority != p.orders[b].priority)
        return p.orders[a].priority > p.orders[b].priority;
      return p.orders[a].id < p.orders[b].id;
    });

  std::vector<Series> cum_demand;
  std::vector<Quantity> demand_total;
  for (const auto& o : p.orders)
  {
    cum_demand.push_back(cumulative(to_series(o.demand, p.horizon)));
    demand_total.push_back(total(o.demand));
  }

  Allocation result;
  std::vector<Quantity> given(p.orders.size(), 0);
  for (std::size_t n = 0; n < N; ++n)
  {
    Quantity free = capacity[n];
    for (const auto i : order)
    {
      const Quantity released = p.no_early_delivery ? cum_demand[i][n] : demand_total[i];
      const Quantity q = std::min(free, released - given[i]);
      if (q <= 0)
        continue;
      result.x[p.orders[i].id][static_cast<Day>(n)] = q;
      given[i] += q;
      free -= q;
    }
  }

  result.objective = evaluate(p, WeightConfig{}, result.x);
  return result;
}

//==============================================================================
struct ReductionRequest
{
  AgentId supplier;

  /// q_mn: reduction requested by this supplier on each day.
  DayMap q;
};

struct ReductionProblem
{
  std::vector<ReductionRequest> requests;

  /// W_n. Empty means N - n.
  std::vector<Weight> day_weights;

  Day horizon = 0;
};

struct ReductionPlan
{
  DayMap r;
  Weight objective = 0;

  bool operator==(const ReductionPlan&) const = default;
};

inline void validate(const ReductionProblem& p)
{
  if (p.horizon <= 0)
    throw ProblemError("horizon must be positive");
  for (const auto& req : p.requests)
    for (const auto& [d, q] : req.q)
    {
      if (d < 0 || d >= p.horizon)
        throw ProblemError("request from " + req.supplier + " outside horizon");
      if (q < 0)
        throw ProblemError("request from " + req.supplier + " is negative");
    }
  WeightConfig w;
  w.day_attenuation = p.day_weights;
  w.validate(p.horizon);
}

inline Weight evaluate(const ReductionProblem& p, const DayMap& r)
{
  WeightConfig w;
  w.day_attenuation = p.day_weights;
  Weight obj = 0;
  for (const auto& [n, q] : r)
    obj += w.day(n, p.horizon) * q;
  return obj;
}

/// Minimizes sum W_n * r_n subject to the cumulative reduction dominating
/// every supplier's cumulative request on every day.
///
/// With W strictly decreasing the objective is a positive combination of the
/// cumulative reductions R_n, so the pointwise smallest feasible R, the
/// running maximum over suppliers, is the unique optimum.
inline ReductionPlan solve_consolidation(const ReductionProblem& p)
{
  validate(p);
  Series need(static_cast<std::size_t>(p.horizon), 0);
  for (const auto& req : p.requests)
  {
    const Series c = cumulative(to_series(req.q, p.horizon));
    for (std::size_t n = 0; n < need.size(); ++n)
      need[n] = std::max(need[n], c[n]);
  }

  ReductionPlan plan;
  plan.r = to_day_map(increments(need));
  plan.objective = evaluate(p, plan.r);
  return plan;
}

} // namespace resched

#endif // RESCHED__OPTIMIZERS_HPP
