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

#ifndef RESCHED__PROBLEM_IO_HPP
#define RESCHED__PROBLEM_IO_HPP

#include <resched/oracle.hpp>
#include <resched/scenario.hpp>

namespace resched {

/// A standalone solver input: an allocation problem (partial,
/// all_or_nothing, capacity) or a consolidation problem.
struct SolverInput
{
  std::string mode;
  AllocationProblem allocation;
  WeightConfig weights;
  ReductionProblem reduction;
};

inline SolverInput solver_input_from_json(const json& j, const std::string& mode_override = "")
{
  using io::Reader;
  SolverInput in;
  in.mode = mode_override;
  if (in.mode.empty())
    in.mode = Reader::string(Reader::field(j, "mode", ""), "/mode");
  const Day horizon = static_cast<Day>(
    Reader::integer(Reader::field(j, "horizon", ""), "/horizon"));

  if (in.mode == "consolidation")
  {
    in.reduction.horizon = horizon;
    const auto& reqs = Reader::array(Reader::field(j, "requests", ""), "/requests");
    for (std::size_t i = 0; i < reqs.size(); ++i)
    {
      const std::string at = "/requests/" + std::to_string(i);
      ReductionRequest r;
      r.supplier = Reader::string(Reader::field(reqs[i], "supplier", at), at + "/supplier");
      r.q = Reader::day_map(Reader::field(reqs[i], "q", at), at + "/q");
      in.reduction.requests.push_back(std::move(r));
    }
    if (const auto* w = Reader::optional(j, "day_weights"))
    {
      Reader::array(*w, "/day_weights");
      for (std::size_t i = 0; i < w->size(); ++i)
        in.reduction.day_weights.push_back(
          Reader::integer((*w)[i], "/day_weights/" + std::to_string(i)));
    }
    return in;
  }

  try
  {
    in.allocation.mode = allocation_mode_from_string(in.mode);
  }
  catch (const InputError& e)
  {
    throw InputError("/mode", e.what());
  }
  in.allocation.horizon = horizon;
  const auto& orders = Reader::array(Reader::field(j, "orders", ""), "/orders");
  for (std::size_t i = 0; i < orders.size(); ++i)
  {
    const std::string at = "/orders/" + std::to_string(i);
    AllocationOrder o;
    o.id = Reader::string(Reader::field(orders[i], "id", at), at + "/id");
    o.demand = Reader::day_map(Reader::field(orders[i], "demand", at), at + "/demand");
    if (const auto* p = Reader::optional(orders[i], "priority"))
      o.priority = static_cast<int>(Reader::integer(*p, at + "/priority"));
    in.allocation.orders.push_back(std::move(o));
  }
  in.allocation.supply = Reader::day_map(Reader::field(j, "supply", ""), "/supply");
  if (const auto* v = Reader::optional(j, "no_early_delivery"))
    in.allocation.no_early_delivery = Reader::boolean(*v, "/no_early_delivery");
  if (const auto* w = Reader::optional(j, "weights"))
  {
    json cfg = {{"weights", *w}};
    in.weights = io::config_from_json(cfg, "").weights;
  }
  return in;
}

/// Solves with the production solver, or exhaustively when `oracle` is set.
inline json solve_to_json(const SolverInput& in, bool oracle)
{
  if (in.mode == "consolidation")
  {
    const auto plan = oracle ? brute_force_oracle(in.reduction)
                             : solve_consolidation(in.reduction);
    return {{"mode", in.mode}, {"r", io::day_map(plan.r)}, {"objective", plan.objective}};
  }
  Allocation a;
  if (oracle)
    a = brute_force_oracle(in.allocation, in.weights);
  else if (in.allocation.mode == AllocationMode::partial)
    a = solve_partial(in.allocation, in.weights);
  else if (in.allocation.mode == AllocationMode::all_or_nothing)
    a = solve_all_or_nothing(in.allocation, in.weights);
  else
    a = solve_capacity(in.allocation);

  json x = json::object();
  for (const auto& [id, m] : a.x)
    x[id] = io::day_map(m);
  return {{"mode", in.mode}, {"x", x}, {"objective", a.objective}};
}

} // namespace resched

#endif // RESCHED__PROBLEM_IO_HPP
