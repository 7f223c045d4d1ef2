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

#ifndef RESCHED__DOMAIN_HPP
#define RESCHED__DOMAIN_HPP

#include <resched/types.hpp>

#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace resched {

/// Customer marker for orders placed by the outside world on finished goods.
inline const AgentId external_customer = "external";

//==============================================================================
struct SupplierLink
{
  AgentId material;

  /// Units of `material` consumed per unit produced by the customer.
  Quantity per_unit = 1;

  bool operator==(const SupplierLink&) const = default;
};

/// One material code at one site, owned by a material agent.
struct MaterialNode
{
  AgentId id;
  std::string location;

  /// Depth below the finished goods; 0 for a finished good. Derived.
  int level = 0;

  std::vector<SupplierLink> suppliers;

  /// Derived from the suppliers of the other nodes.
  std::vector<AgentId> customers;

  std::optional<AgentId> capacity_package;

  /// Derived: true when nothing in the BOM consumes this material.
  bool finished_good = false;

  /// Carried for completeness; the engine never switches to a substitute.
  std::vector<AgentId> substitutes;

  bool is_raw() const { return suppliers.empty(); }
};

struct BomGraph
{
  std::map<AgentId, MaterialNode> nodes;
};

/// Per-day capacity. Unused capacity expires at the end of its day.
struct CapacityProfile
{
  DayMap per_day;

  Quantity on(Day d) const
  {
    const auto it = per_day.find(d);
    return it == per_day.end() ? 0 : it->second;
  }

  bool operator==(const CapacityProfile&) const = default;
};

struct CapacityPackage
{
  AgentId id;
  std::vector<AgentId> members;
  CapacityProfile profile;

  bool operator==(const CapacityPackage&) const = default;
};

//==============================================================================
enum class OrderStatus
{
  active,
  partially_reduced,
  cancelled
};

inline const char* to_string(OrderStatus s)
{
  switch (s)
  {
    case OrderStatus::active: return "active";
    case OrderStatus::partially_reduced: return "partially_reduced";
    case OrderStatus::cancelled: return "cancelled";
  }
  return "?";
}

/// A dated demand of a customer on one of its suppliers. `demand` is what
/// was originally requested; `committed` is what the supplier currently
/// promises to deliver on each day.
struct Order
{
  OrderId id;
  AgentId supplier;
  AgentId customer;
  AgentId material;
  DayMap demand;
  DayMap committed;
  int priority = 1;
  OrderStatus status = OrderStatus::active;

  bool external() const { return customer == external_customer; }

  bool operator==(const Order&) const = default;
};

/// A window during which an agent's finished output is held back, e.g. for
/// quality quarantine. Output completed inside [start, end) only becomes
/// available on `end`; `quantity` caps how many units are held.
struct OutputHold
{
  Day start = 0;
  Day end = 0;
  std::optional<Quantity> quantity;

  bool operator==(const OutputHold&) const = default;
};

struct SupplyProfile
{
  Quantity in_stock = 0;
  DayMap in_transit;
  DayMap planned_production;
  std::vector<OutputHold> output_holds;

  bool operator==(const SupplyProfile&) const = default;
};

//==============================================================================
enum class DisruptionKind
{
  raw_material_delay,
  sfg_quarantine,
  line_stoppage
};

inline const char* to_string(DisruptionKind k)
{
  switch (k)
  {
    case DisruptionKind::raw_material_delay: return "raw_material_delay";
    case DisruptionKind::sfg_quarantine: return "sfg_quarantine";
    case DisruptionKind::line_stoppage: return "line_stoppage";
  }
  return "?";
}

inline DisruptionKind disruption_kind_from_string(const std::string& s)
{
  if (s == "raw_material_delay" || s == "rm-delay")
    return DisruptionKind::raw_material_delay;
  if (s == "sfg_quarantine" || s == "quarantine")
    return DisruptionKind::sfg_quarantine;
  if (s == "line_stoppage" || s == "stoppage")
    return DisruptionKind::line_stoppage;
  throw InputError("", "unknown disruption kind '" + s + "'");
}

struct DisruptionEvent
{
  DisruptionKind kind = DisruptionKind::raw_material_delay;
  AgentId target;
  Day start_day = 0;
  Day duration_days = 1;

  /// Units delayed or quarantined; empty means everything in the window.
  std::optional<Quantity> affected_quantity;

  Day end_day() const { return start_day + duration_days; }

  bool operator==(const DisruptionEvent&) const = default;
};

//==============================================================================
/// The parts of the world the negotiation changes, frozen at load time.
struct Snapshot
{
  std::map<OrderId, Order> orders;
  std::map<AgentId, SupplyProfile> supply;
  std::map<AgentId, CapacityPackage> packages;

  bool operator==(const Snapshot&) const = default;
};

struct WorldState
{
  Day horizon = 14;
  BomGraph bom;
  std::map<AgentId, CapacityPackage> packages;
  std::map<OrderId, Order> orders;
  std::map<AgentId, SupplyProfile> supply;

  /// Shared between copies; never mutated after build_world().
  std::shared_ptr<const Snapshot> baseline;

  const MaterialNode& material(const AgentId& id) const
  {
    const auto it = bom.nodes.find(id);
    if (it == bom.nodes.end())
      throw InputError("", "unknown material agent " + id);
    return it->second;
  }

  bool is_material(const AgentId& id) const { return bom.nodes.count(id) > 0; }
  bool is_package(const AgentId& id) const { return packages.count(id) > 0; }

  const SupplyProfile& supply_of(const AgentId& id) const
  {
    const auto it = supply.find(id);
    if (it == supply.end())
      throw InputError("", "unknown material agent " + id);
    return it->second;
  }

  /// Orders supplied by `agent`, ascending id.
  std::vector<const Order*> outgoing(const AgentId& agent) const
  {
    std::vector<const Order*> out;
    for (const auto& [id, o] : orders)
      if (o.supplier == agent)
        out.push_back(&o);
    return out;
  }

  /// Orders placed by `customer` on `supplier`, ascending id.
  std::vector<const Order*> between(const AgentId& supplier, const AgentId& customer) const
  {
    std::vector<const Order*> out;
    for (const auto& [id, o] : orders)
      if (o.supplier == supplier && o.customer == customer)
        out.push_back(&o);
    return out;
  }

  Snapshot snapshot() const { return {orders, supply, packages}; }
};

//==============================================================================
/// Cumulative units that have become available to `agent` by each day of the
/// horizon: stock, arrivals and released output. Non-decreasing.
inline Series availability_curve(const WorldState& w, const AgentId& agent)
{
  const auto& sp = w.supply_of(agent);
  const auto H = static_cast<std::size_t>(w.horizon);

  // Released output per day after applying holds in order.
  Series produced = to_series(sp.planned_production, w.horizon);
  Series released = produced;
  for (const auto& h : sp.output_holds)
  {
    Quantity budget = h.quantity.value_or(std::numeric_limits<Quantity>::max());
    Quantity moved = 0;
    for (Day d = std::max(h.start, 0); d < std::min(h.end, w.horizon) && budget > 0; ++d)
    {
      const auto i = static_cast<std::size_t>(d);
      const Quantity take = std::min(budget, released[i]);
      released[i] -= take;
      budget -= take;
      moved += take;
    }
    if (h.end < w.horizon)
      released[static_cast<std::size_t>(h.end)] += moved;
  }

  Series curve(H, 0);
  Quantity run = sp.in_stock;
  const Series transit = to_series(sp.in_transit, w.horizon);
  for (std::size_t n = 0; n < H; ++n)
  {
    run += transit[n] + released[n];
    curve[n] = run;
  }
  return curve;
}

/// Gross cumulative availability of a material agent by `day`, or the
/// capacity of a capacity agent on `day` (capacity does not accumulate).
inline Quantity cumulative_available(const WorldState& w, const AgentId& agent, Day day)
{
  if (day < 0 || day >= w.horizon)
    throw InputError("", "day " + std::to_string(day) + " outside horizon");
  if (const auto it = w.packages.find(agent); it != w.packages.end())
    return it->second.profile.on(day);
  return availability_curve(w, agent)[static_cast<std::size_t>(day)];
}

/// Cumulative commitments of `agent` to all of its customers.
inline Series commitment_curve(const WorldState& w, const AgentId& agent)
{
  Series s(static_cast<std::size_t>(w.horizon), 0);
  for (const auto* o : w.outgoing(agent))
  {
    const Series c = to_series(o->committed, w.horizon);
    for (std::size_t i = 0; i < s.size(); ++i)
      s[i] += c[i];
  }
  return cumulative(s);
}

/// Cumulative deliveries promised by `supplier` to `customer`.
inline Series delivery_curve(const WorldState& w, const AgentId& supplier, const AgentId& customer)
{
  Series s(static_cast<std::size_t>(w.horizon), 0);
  for (const auto* o : w.between(supplier, customer))
  {
    const Series c = to_series(o->committed, w.horizon);
    for (std::size_t i = 0; i < s.size(); ++i)
      s[i] += c[i];
  }
  return cumulative(s);
}

/// Per-day load of a capacity package: the summed production of its members.
inline Series capacity_load(const WorldState& w, const CapacityPackage& p)
{
  Series load(static_cast<std::size_t>(w.horizon), 0);
  for (const auto& m : p.members)
  {
    const Series prod = to_series(w.supply_of(m).planned_production, w.horizon);
    for (std::size_t i = 0; i < load.size(); ++i)
      load[i] += prod[i];
  }
  return load;
}

//==============================================================================
struct Violation
{
  enum class Kind { supply, consumption, capacity, order };

  Kind kind;
  AgentId agent;
  Day day = 0;
  std::string detail;
};

/// Every supply (cumulative), consumption and capacity (per-day) constraint
/// of the world, checked directly from the schedules.
inline std::vector<Violation> check_feasibility(const WorldState& w)
{
  std::vector<Violation> out;
  const auto H = static_cast<std::size_t>(w.horizon);

  for (const auto& [id, o] : w.orders)
  {
    for (const auto& [d, q] : o.committed)
    {
      if (d < 0 || d >= w.horizon || q < 0)
        out.push_back({Violation::Kind::order, o.supplier, d,
                       "order " + id + " has an invalid commitment"});
    }
  }

  for (const auto& [id, node] : w.bom.nodes)
  {
    const Series avail = availability_curve(w, id);
    const Series committed = commitment_curve(w, id);
    for (std::size_t n = 0; n < H; ++n)
    {
      if (committed[n] > avail[n])
      {
        out.push_back({Violation::Kind::supply, id, static_cast<Day>(n),
                       "cumulative commitments " + std::to_string(committed[n])
                       + " exceed cumulative availability " + std::to_string(avail[n])});
        break;
      }
    }

    const Series prod = cumulative(to_series(w.supply_of(id).planned_production, w.horizon));
    for (const auto& link : node.suppliers)
    {
      const Series got = delivery_curve(w, link.material, id);
      for (std::size_t n = 0; n < H; ++n)
      {
        if (link.per_unit * prod[n] > got[n])
        {
          out.push_back({Violation::Kind::consumption, id, static_cast<Day>(n),
                         "production needs " + std::to_string(link.per_unit * prod[n])
                         + " of " + link.material + " but only "
                         + std::to_string(got[n]) + " is delivered"});
          break;
        }
      }
    }
  }

  for (const auto& [id, pkg] : w.packages)
  {
    const Series load = capacity_load(w, pkg);
    for (std::size_t n = 0; n < H; ++n)
    {
      if (load[n] > pkg.profile.on(static_cast<Day>(n)))
      {
        out.push_back({Violation::Kind::capacity, id, static_cast<Day>(n),
                       "load " + std::to_string(load[n]) + " exceeds capacity "
                       + std::to_string(pkg.profile.on(static_cast<Day>(n)))});
        break;
      }
    }
  }
  return out;
}

/// Orders whose cumulative commitment exceeds the baseline on some day.
inline std::vector<Violation> check_degradation(const WorldState& w)
{
  std::vector<Violation> out;
  if (!w.baseline)
    return out;
  for (const auto& [id, o] : w.orders)
  {
    const auto it = w.baseline->orders.find(id);
    const DayMap empty;
    const DayMap& base = it == w.baseline->orders.end() ? empty : it->second.committed;
    const Series now = cumulative(to_series(o.committed, w.horizon));
    const Series then = cumulative(to_series(base, w.horizon));
    for (std::size_t n = 0; n < now.size(); ++n)
    {
      if (now[n] > then[n])
      {
        out.push_back({Violation::Kind::order, o.supplier, static_cast<Day>(n),
                       "order " + id + " commits more than its baseline"});
        break;
      }
    }
  }
  return out;
}

//==============================================================================
namespace detail {

inline void compute_levels(BomGraph& bom)
{
  for (auto& [id, n] : bom.nodes)
    n.customers.clear();
  for (const auto& [id, n] : bom.nodes)
    for (const auto& l : n.suppliers)
      bom.nodes.at(l.material).customers.push_back(id);

  // Iterative DFS from every node along supplier links; grey nodes on the
  // stack reveal a cycle.
  enum class Mark { white, grey, black };
  std::map<AgentId, Mark> mark;
  for (const auto& [id, n] : bom.nodes)
    mark[id] = Mark::white;

  std::vector<AgentId> topo;
  for (const auto& [root, _] : bom.nodes)
  {
    if (mark[root] != Mark::white)
      continue;
    std::vector<std::pair<AgentId, std::size_t>> stack{{root, 0}};
    mark[root] = Mark::grey;
    while (!stack.empty())
    {
      auto& [id, next] = stack.back();
      const auto& sup = bom.nodes.at(id).suppliers;
      if (next < sup.size())
      {
        const AgentId child = sup[next++].material;
        if (mark[child] == Mark::grey)
          throw CycleError("/materials", "BOM cycle through " + child + " and " + id);
        if (mark[child] == Mark::white)
        {
          mark[child] = Mark::grey;
          stack.emplace_back(child, 0);
        }
        continue;
      }
      mark[id] = Mark::black;
      topo.push_back(id);
      stack.pop_back();
    }
  }

  // topo lists suppliers before customers; walk it backwards so every
  // customer's level is final before its suppliers are visited.
  for (auto it = topo.rbegin(); it != topo.rend(); ++it)
  {
    auto& n = bom.nodes.at(*it);
    n.finished_good = n.customers.empty();
    int level = 0;
    for (const auto& c : n.customers)
      level = std::max(level, bom.nodes.at(c).level + 1);
    n.level = level;
  }
  for (auto& [id, n] : bom.nodes)
    std::sort(n.customers.begin(), n.customers.end());
}

inline void check_day_map(const DayMap& m, Day horizon, const std::string& where, bool positive)
{
  for (const auto& [d, q] : m)
  {
    if (d < 0 || d >= horizon)
      throw InputError(where, "day " + std::to_string(d) + " outside the horizon");
    if (positive ? q <= 0 : q < 0)
      throw InputError(where, "quantity on day " + std::to_string(d)
                       + (positive ? " must be positive" : " must not be negative"));
  }
}

} // namespace detail

//==============================================================================
/// Assembles and validates a world, derives customer links, levels and
/// capacity links, checks the initial schedule and freezes it as baseline.
inline WorldState build_world(
  std::vector<MaterialNode> nodes,
  std::vector<CapacityPackage> packages,
  std::vector<Order> orders,
  std::map<AgentId, SupplyProfile> supplies,
  Day horizon)
{
  if (horizon <= 0)
    throw InputError("/horizon_days", "horizon must be positive");

  WorldState w;
  w.horizon = horizon;

  for (std::size_t i = 0; i < nodes.size(); ++i)
  {
    const std::string where = "/materials/" + std::to_string(i);
    auto& n = nodes[i];
    if (n.id.empty() || n.id == external_customer)
      throw InputError(where + "/id", "invalid material id '" + n.id + "'");
    if (w.bom.nodes.count(n.id))
      throw InputError(where + "/id", "duplicate material id " + n.id);
    w.bom.nodes.emplace(n.id, std::move(n));
  }

  for (auto& [id, n] : w.bom.nodes)
  {
    std::set<AgentId> seen;
    for (std::size_t k = 0; k < n.suppliers.size(); ++k)
    {
      const auto& l = n.suppliers[k];
      const std::string where = "/materials/" + id + "/suppliers/" + std::to_string(k);
      if (!w.bom.nodes.count(l.material))
        throw InputError(where, "unknown supplier material " + l.material);
      if (l.material == id)
        throw CycleError(where, "material " + id + " supplies itself");
      if (l.per_unit <= 0)
        throw InputError(where + "/per_unit", "consumption per unit must be positive");
      if (!seen.insert(l.material).second)
        throw InputError(where, "duplicate supplier " + l.material);
    }
  }
  detail::compute_levels(w.bom);

  for (std::size_t k = 0; k < packages.size(); ++k)
  {
    const std::string where = "/capacity_packages/" + std::to_string(k);
    auto& p = packages[k];
    if (p.id.empty() || w.bom.nodes.count(p.id) || w.packages.count(p.id))
      throw InputError(where + "/id", "invalid or duplicate package id '" + p.id + "'");
    std::sort(p.members.begin(), p.members.end());
    for (const auto& m : p.members)
    {
      const auto it = w.bom.nodes.find(m);
      if (it == w.bom.nodes.end())
        throw InputError(where + "/members", "unknown member material " + m);
      auto& link = it->second.capacity_package;
      if (link && *link != p.id)
        throw InputError(where + "/members", "material " + m + " already belongs to "
                         + *link);
      link = p.id;
    }
    detail::check_day_map(p.profile.per_day, horizon, where + "/capacity", false);
    w.packages.emplace(p.id, std::move(p));
  }
  for (const auto& [id, n] : w.bom.nodes)
  {
    if (n.capacity_package && !w.packages.count(*n.capacity_package))
      throw InputError("/materials/" + id + "/capacity_package",
                       "unknown capacity package " + *n.capacity_package);
    const auto& members = n.capacity_package
      ? w.packages.at(*n.capacity_package).members : std::vector<AgentId>{};
    if (n.capacity_package
        && std::find(members.begin(), members.end(), id) == members.end())
    {
      w.packages.at(*n.capacity_package).members.push_back(id);
      auto& mem = w.packages.at(*n.capacity_package).members;
      std::sort(mem.begin(), mem.end());
    }
  }

  for (std::size_t k = 0; k < orders.size(); ++k)
  {
    const std::string where = "/orders/" + std::to_string(k);
    auto& o = orders[k];
    if (o.id.empty() || w.orders.count(o.id))
      throw InputError(where + "/id", "invalid or duplicate order id '" + o.id + "'");
    if (!w.bom.nodes.count(o.supplier))
      throw InputError(where + "/supplier", "unknown supplier " + o.supplier);
    if (o.material.empty())
      o.material = o.supplier;
    if (o.material != o.supplier)
      throw InputError(where + "/material", "material " + o.material
                       + " is not produced by " + o.supplier);
    if (!o.external())
    {
      const auto it = w.bom.nodes.find(o.customer);
      if (it == w.bom.nodes.end())
        throw InputError(where + "/customer", "unknown customer " + o.customer);
      const auto& sup = it->second.suppliers;
      if (std::none_of(sup.begin(), sup.end(),
                       [&](const SupplierLink& l) { return l.material == o.supplier; }))
        throw InputError(where + "/customer", o.customer + " does not consume "
                         + o.supplier);
    }
    if (o.priority <= 0)
      throw InputError(where + "/priority", "priority must be positive");
    detail::check_day_map(o.demand, horizon, where + "/demand", true);
    detail::check_day_map(o.committed, horizon, where + "/committed", false);
    if (o.status == OrderStatus::cancelled && total(o.committed) != 0)
      throw InputError(where + "/status", "a cancelled order cannot keep commitments");
    w.orders.emplace(o.id, std::move(o));
  }

  for (auto& [id, sp] : supplies)
  {
    const std::string where = "/supply/" + id;
    if (!w.bom.nodes.count(id))
      throw InputError(where, "supply profile for unknown material " + id);
    if (sp.in_stock < 0)
      throw InputError(where + "/in_stock", "stock must not be negative");
    for (const auto& [d, q] : sp.in_transit)
      if (d < 0 || q < 0)
        throw InputError(where + "/in_transit", "invalid arrival on day " + std::to_string(d));
    detail::check_day_map(sp.planned_production, horizon, where + "/planned_production", false);
    for (const auto& h : sp.output_holds)
      if (h.start < 0 || h.end <= h.start || (h.quantity && *h.quantity < 0))
        throw InputError(where + "/output_holds", "invalid hold window");
  }
  for (const auto& [id, n] : w.bom.nodes)
    supplies.try_emplace(id);
  w.supply = std::move(supplies);

  const auto violations = check_feasibility(w);
  if (!violations.empty())
  {
    const auto& v = violations.front();
    throw InfeasibleError("initial schedule infeasible at " + v.agent + " day "
                          + std::to_string(v.day) + ": " + v.detail);
  }

  w.baseline = std::make_shared<const Snapshot>(w.snapshot());
  return w;
}

/// Restores the schedules and inputs frozen at build time.
inline void reset_to_baseline(WorldState& w)
{
  if (!w.baseline)
    return;
  w.orders = w.baseline->orders;
  w.supply = w.baseline->supply;
  w.packages = w.baseline->packages;
}

//==============================================================================
struct DisruptionOutcome
{
  WorldState world;
  std::set<AgentId> affected;
};

inline void validate(const WorldState& w, const DisruptionEvent& e)
{
  if (e.duration_days <= 0)
    throw InputError("/duration_days", "duration must be positive");
  if (e.start_day < 0 || e.start_day >= w.horizon)
    throw InputError("/start_day", "disruption starts outside the horizon");
  if (e.affected_quantity && *e.affected_quantity < 0)
    throw InputError("/affected_quantity", "affected quantity must not be negative");
  if (e.kind == DisruptionKind::line_stoppage)
  {
    if (!w.is_package(e.target))
      throw InputError("/target", "line stoppage needs a capacity agent, got '"
                       + e.target + "'");
  }
  else if (!w.is_material(e.target))
  {
    throw InputError("/target", std::string(to_string(e.kind))
                     + " needs a material agent, got '" + e.target + "'");
  }
}

/// Perturbs the world's inputs. Returns the agents whose supply or capacity
/// actually changed.
inline DisruptionOutcome apply_disruption(WorldState w, const DisruptionEvent& e)
{
  validate(w, e);
  DisruptionOutcome out;

  switch (e.kind)
  {
    case DisruptionKind::raw_material_delay:
    {
      auto& transit = w.supply.at(e.target).in_transit;
      Quantity budget = e.affected_quantity.value_or(std::numeric_limits<Quantity>::max());
      Quantity moved = 0;
      for (auto it = transit.lower_bound(e.start_day);
           it != transit.end() && it->first < e.end_day() && budget > 0;)
      {
        const Quantity take = std::min(budget, it->second);
        budget -= take;
        moved += take;
        it->second -= take;
        it = it->second == 0 ? transit.erase(it) : std::next(it);
      }
      if (moved > 0)
      {
        add_to(transit, e.end_day(), moved);
        out.affected.insert(e.target);
      }
      break;
    }
    case DisruptionKind::sfg_quarantine:
    {
      const Series before = availability_curve(w, e.target);
      w.supply.at(e.target).output_holds.push_back(
        {e.start_day, e.end_day(), e.affected_quantity});
      if (availability_curve(w, e.target) != before)
        out.affected.insert(e.target);
      break;
    }
    case DisruptionKind::line_stoppage:
    {
      auto& per_day = w.packages.at(e.target).profile.per_day;
      for (Day d = e.start_day; d < std::min(e.end_day(), w.horizon); ++d)
      {
        if (per_day.erase(d))
          out.affected.insert(e.target);
      }
      break;
    }
  }

  out.world = std::move(w);
  return out;
}

} // namespace resched

#endif // RESCHED__DOMAIN_HPP
