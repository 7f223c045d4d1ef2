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

#ifndef RESCHED__ENGINE_HPP
#define RESCHED__ENGINE_HPP

#include <resched/domain.hpp>
#include <resched/optimizers.hpp>

#include <future>
#include <set>
#include <string>
#include <vector>

namespace resched {

//==============================================================================
enum class FulfillmentMode
{
  partial,
  all_or_nothing
};

inline const char* to_string(FulfillmentMode m)
{
  return m == FulfillmentMode::partial ? "partial" : "all_or_nothing";
}

inline FulfillmentMode fulfillment_mode_from_string(const std::string& s)
{
  if (s == "partial")
    return FulfillmentMode::partial;
  if (s == "all_or_nothing" || s == "aon")
    return FulfillmentMode::all_or_nothing;
  throw InputError("", "unknown fulfillment mode '" + s + "'");
}

struct EngineConfig
{
  Day horizon_days = 14;

  /// Safety bound on negotiation rounds.
  int max_iterations = 50;

  FulfillmentMode fulfillment_mode = FulfillmentMode::partial;
  WeightConfig weights;

  /// Strip production that is no longer demanded once the network is
  /// stable.
  bool inventory_reduction_enabled = false;

  /// Evaluate agents of a wave one after another in id order. When unset
  /// they are evaluated concurrently; the merge is id-ordered either way.
  bool deterministic_order = true;

  void validate() const
  {
    if (max_iterations < 1)
      throw InputError("/config/max_iterations", "max_iterations must be at least 1");
    weights.validate(horizon_days);
  }
};

/// A requested change sent from one agent to a neighbour. `deltas` holds the
/// cumulative shortfall against the receiver's current plan: for a supplier
/// proposal, how far cumulative deliveries on `order` fall behind what was
/// promised; for a capacity proposal, how far cumulative production must
/// fall behind the member's plan. Only positive days are stored.
struct ChangeProposal
{
  AgentId from;
  AgentId to;
  OrderId order;
  DayMap deltas;
  int round = 0;

  bool operator==(const ChangeProposal&) const = default;
};

/// Identifier of the implicit order a capacity package holds for one member.
inline OrderId capacity_order_id(const AgentId& package, const AgentId& member)
{
  return package + "/" + member;
}

/// What one agent step changes. Agents only touch their own production and
/// the commitments of orders they supply.
struct AgentUpdate
{
  AgentId agent;
  std::optional<DayMap> production;
  std::map<OrderId, DayMap> commitments;
  std::vector<ChangeProposal> proposals;
  std::optional<ReductionPlan> reduction;

  bool changes_schedule() const { return production || !commitments.empty(); }
  bool empty() const { return !changes_schedule() && proposals.empty(); }
};

struct TraceRecord
{
  int round = 0;
  std::string phase;
  AgentId agent;
  std::vector<ChangeProposal> proposals_in;
  std::vector<ChangeProposal> proposals_out;
  DayMap production_delta;
  std::map<OrderId, DayMap> commitment_deltas;
  std::optional<DayMap> reduction;
};

struct RoundSummary
{
  int round = 0;
  std::size_t proposals = 0;
  std::set<AgentId> rescheduled;
  bool changed = false;
};

struct RunResult
{
  WorldState world;
  int iterations_used = 0;
  std::vector<TraceRecord> trace;
  std::vector<RoundSummary> rounds;
  bool stabilized = false;

  /// Agents whose schedule differs from the world the run started from.
  std::set<AgentId> affected_materials;
  std::set<AgentId> affected_capacities;
  std::set<AgentId> affected_finished_goods;

  /// Agents directly hit by the events.
  std::set<AgentId> triggered;
};

//==============================================================================
namespace detail {

inline Series diff_positive(const Series& before, const Series& after)
{
  Series d(before.size(), 0);
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = std::max<Quantity>(0, before[i] - after[i]);
  return d;
}

inline DayMap delta_map(const DayMap& before, const DayMap& after)
{
  DayMap d = after;
  for (const auto& [day, q] : before)
    add_to(d, day, -q);
  return d;
}

/// Highest priority among the orders an agent supplies; the priority of its
/// production on a shared line.
inline int material_priority(const WorldState& w, const AgentId& agent)
{
  int p = 1;
  for (const auto* o : w.outgoing(agent))
    p = std::max(p, o->priority);
  return p;
}

} // namespace detail

//==============================================================================
/// Disruption entry point: applies the event and returns the agents whose
/// supply or capacity changed.
inline std::set<AgentId> trigger(WorldState& world, const DisruptionEvent& event)
{
  auto outcome = apply_disruption(std::move(world), event);
  world = std::move(outcome.world);
  return outcome.affected;
}

//==============================================================================
/// One task cycle of a material agent against a read-only snapshot.
///
/// 1. Consolidation: every supplier's current deliveries and every capacity
///    proposal in the inbox bound the agent's cumulative production. The
///    per-supplier shortfalls are reconciled into one reduction plan, then
///    the reduced quantity is re-inserted on the earliest days the bounds
///    allow.
/// 2. Supplier allocation: if cumulative availability no longer covers the
///    cumulative commitments, the agent re-allocates what it has across its
///    customer orders and sends each shorted customer a proposal.
inline AgentUpdate material_agent_step(
  const WorldState& world,
  const AgentId& agent,
  const std::vector<ChangeProposal>& inbox,
  const EngineConfig& config,
  int round = 0)
{
  const auto& node = world.material(agent);
  const auto H = world.horizon;
  const auto N = static_cast<std::size_t>(H);

  for (const auto& p : inbox)
  {
    if (p.to != agent)
      throw InputError("", "proposal for " + p.to + " delivered to " + agent);
    if (!world.orders.count(p.order) && !world.is_package(p.from))
      throw InputError("", "proposal references unknown order " + p.order);
  }

  AgentUpdate update;
  update.agent = agent;

  const DayMap& production_now = world.supply_of(agent).planned_production;
  const Series cum_prod = cumulative(to_series(production_now, H));

  // Step 1: production bounds from suppliers and capacity.
  std::vector<std::pair<AgentId, Series>> deficits;
  Series bound = cum_prod;
  for (const auto& link : node.suppliers)
  {
    const Series got = delivery_curve(world, link.material, agent);
    Series deficit(N, 0);
    bool any = false;
    for (std::size_t n = 0; n < N; ++n)
    {
      const Quantity supported = floor_div(got[n], link.per_unit);
      bound[n] = std::min(bound[n], supported);
      deficit[n] = std::max<Quantity>(0, cum_prod[n] - supported);
      any = any || deficit[n] > 0;
    }
    if (any)
      deficits.emplace_back(link.material, std::move(deficit));
  }
  for (const auto& p : inbox)
  {
    if (!world.is_package(p.from))
      continue;
    const Series cut = to_series(p.deltas, H);
    Series deficit(N, 0);
    bool any = false;
    for (std::size_t n = 0; n < N; ++n)
    {
      bound[n] = std::min(bound[n], cum_prod[n] - cut[n]);
      deficit[n] = std::max<Quantity>(0, cut[n]);
      any = any || deficit[n] > 0;
    }
    if (any)
      deficits.emplace_back(p.from, std::move(deficit));
  }

  Series new_cum_prod = cum_prod;
  if (!deficits.empty())
  {
    // Cumulative reductions can only grow, so each request is the running
    // maximum of that supplier's shortfall.
    ReductionProblem rp;
    rp.horizon = H;
    rp.day_weights = config.weights.day_attenuation;
    for (const auto& [from, deficit] : deficits)
    {
      Series runmax(N, 0);
      Quantity m = 0;
      for (std::size_t n = 0; n < N; ++n)
      {
        m = std::max(m, deficit[n]);
        runmax[n] = m;
      }
      rp.requests.push_back({from, to_day_map(increments(runmax))});
    }
    update.reduction = solve_consolidation(rp);

    // Reschedule: whatever the plan cut is produced again as soon as every
    // bound allows it, never ahead of the current plan.
    const Series cut = cumulative(to_series(update.reduction->r, H));
    for (std::size_t n = 0; n < N; ++n)
      new_cum_prod[n] = std::max(cum_prod[n] - cut[n], std::min(cum_prod[n], bound[n]));
    for (std::size_t n = N; n-- > 1;)
      new_cum_prod[n - 1] = std::min(new_cum_prod[n - 1], new_cum_prod[n]);

    const DayMap new_production = to_day_map(increments(new_cum_prod));
    if (new_production != production_now)
    {
      update.production = new_production;
      if (node.capacity_package)
      {
        const Series cut_total = detail::diff_positive(cum_prod, new_cum_prod);
        update.proposals.push_back({agent, *node.capacity_package,
                                    capacity_order_id(*node.capacity_package, agent),
                                    to_day_map(cut_total), round});
      }
    }
  }

  // Step 2: supplier-side allocation against the updated availability.
  WorldState const* view = &world;
  WorldState local;
  if (update.production)
  {
    local = world;
    local.supply.at(agent).planned_production = *update.production;
    view = &local;
  }
  const Series avail = availability_curve(*view, agent);
  const Series committed = commitment_curve(*view, agent);
  bool short_supply = false;
  for (std::size_t n = 0; n < N; ++n)
    short_supply = short_supply || committed[n] > avail[n];
  if (!short_supply)
    return update;

  AllocationProblem ap;
  ap.horizon = H;
  ap.mode = config.fulfillment_mode == FulfillmentMode::partial
    ? AllocationMode::partial : AllocationMode::all_or_nothing;
  ap.no_early_delivery = true;
  ap.supply = to_day_map(increments(avail));
  const auto outgoing = view->outgoing(agent);
  for (const auto* o : outgoing)
    ap.orders.push_back({o->id, o->committed, o->priority});

  const Allocation alloc = ap.mode == AllocationMode::partial
    ? solve_partial(ap, config.weights)
    : solve_all_or_nothing(ap, config.weights);

  for (const auto* o : outgoing)
  {
    const auto it = alloc.x.find(o->id);
    const DayMap next = it == alloc.x.end() ? DayMap{} : it->second;
    if (next == o->committed)
      continue;
    update.commitments[o->id] = next;
    if (o->external())
      continue;
    const Series shortfall = detail::diff_positive(
      cumulative(to_series(o->committed, H)), cumulative(to_series(next, H)));
    update.proposals.push_back({agent, o->customer, o->id, to_day_map(shortfall), round});
  }
  return update;
}

//==============================================================================
/// One task cycle of a capacity agent: when its members' production
/// overloads some day, re-allocate capacity and propose the cuts.
inline AgentUpdate capacity_agent_step(
  const WorldState& world,
  const AgentId& package,
  const std::vector<ChangeProposal>& /*inbox*/,
  const EngineConfig& /*config*/,
  int round = 0)
{
  const auto pit = world.packages.find(package);
  if (pit == world.packages.end())
    throw InputError("", "unknown capacity agent " + package);
  const auto& pkg = pit->second;

  AgentUpdate update;
  update.agent = package;

  const Series load = capacity_load(world, pkg);
  bool over = false;
  for (std::size_t n = 0; n < load.size(); ++n)
    over = over || load[n] > pkg.profile.on(static_cast<Day>(n));
  if (!over)
    return update;

  AllocationProblem ap;
  ap.horizon = world.horizon;
  ap.mode = AllocationMode::capacity;
  ap.no_early_delivery = true;
  ap.supply = pkg.profile.per_day;
  for (const auto& m : pkg.members)
    ap.orders.push_back({m, world.supply_of(m).planned_production,
                         detail::material_priority(world, m)});
  const Allocation alloc = solve_capacity(ap);

  for (const auto& m : pkg.members)
  {
    const DayMap& now = world.supply_of(m).planned_production;
    const auto it = alloc.x.find(m);
    const DayMap next = it == alloc.x.end() ? DayMap{} : it->second;
    if (next == now)
      continue;
    const Series cut = detail::diff_positive(
      cumulative(to_series(now, world.horizon)), cumulative(to_series(next, world.horizon)));
    update.proposals.push_back({package, m, capacity_order_id(package, m),
                                to_day_map(cut), round});
  }
  return update;
}

//==============================================================================
/// Strips production that is no longer demanded downstream, finished goods
/// first. An agent gives up at most the quantity its customers no longer
/// take, and never so much that a commitment would go uncovered. The
/// deliveries it then no longer needs are released at its suppliers, which
/// repeat the procedure one level further down.
inline WorldState inventory_reduction(WorldState world)
{
  if (!world.baseline)
    return world;
  const auto H = world.horizon;
  const auto N = static_cast<std::size_t>(H);
  const auto& base = *world.baseline;

  std::vector<const MaterialNode*> by_level;
  for (const auto& [id, n] : world.bom.nodes)
    by_level.push_back(&n);
  std::stable_sort(by_level.begin(), by_level.end(),
    [](const MaterialNode* a, const MaterialNode* b) { return a->level < b->level; });

  auto base_total_commit = [&](const AgentId& agent)
    {
      Quantity t = 0;
      for (const auto& [id, o] : base.orders)
        if (o.supplier == agent)
          t += total(o.committed);
      return t;
    };

  for (const auto* node : by_level)
  {
    const AgentId& id = node->id;
    auto& production = world.supply.at(id).planned_production;

    // Production no longer demanded and not yet removed.
    const Quantity dropped_demand = base_total_commit(id) - commitment_curve(world, id).back();
    const auto bit = base.supply.find(id);
    const Quantity dropped_production = bit == base.supply.end() ? 0
      : total(bit->second.planned_production) - total(production);
    Quantity strip = std::max<Quantity>(0, dropped_demand - dropped_production);

    for (Day d = H - 1; d >= 0 && strip > 0; --d)
    {
      const auto pit = production.find(d);
      if (pit == production.end())
        continue;
      const Series avail = availability_curve(world, id);
      const Series committed = commitment_curve(world, id);
      Quantity slack = std::numeric_limits<Quantity>::max();
      for (std::size_t n = static_cast<std::size_t>(d); n < N; ++n)
        slack = std::min(slack, avail[n] - committed[n]);
      const Quantity take = std::min({strip, pit->second, std::max<Quantity>(0, slack)});
      if (take <= 0)
        continue;
      add_to(production, d, -take);
      strip -= take;
    }

    // Release deliveries the reduced production no longer consumes.
    const Series cum_prod = cumulative(to_series(production, H));
    Series base_cum_prod = cum_prod;
    if (bit != base.supply.end())
      base_cum_prod = cumulative(to_series(bit->second.planned_production, H));
    for (const auto& link : node->suppliers)
    {
      const Series got = delivery_curve(world, link.material, id);
      Series base_got(N, 0);
      for (const auto& [oid, o] : base.orders)
        if (o.supplier == link.material && o.customer == id)
        {
          const Series c = cumulative(to_series(o.committed, H));
          for (std::size_t n = 0; n < N; ++n)
            base_got[n] += c[n];
        }
      const Quantity excess_now = got.back() - link.per_unit * cum_prod.back();
      const Quantity excess_base = base_got.back() - link.per_unit * base_cum_prod.back();
      Quantity release = std::max<Quantity>(0, excess_now - std::max<Quantity>(0, excess_base));

      // Latest commitments of the least important orders go first.
      auto orders = world.between(link.material, id);
      std::stable_sort(orders.begin(), orders.end(), [](const Order* a, const Order* b)
        {
          if (a->priority != b->priority)
            return a->priority < b->priority;
          return a->id > b->id;
        });
      for (const auto* op : orders)
      {
        auto& committed = world.orders.at(op->id).committed;
        for (Day d = H - 1; d >= 0 && release > 0; --d)
        {
          const auto cit = committed.find(d);
          if (cit == committed.end())
            continue;
          const Series now = delivery_curve(world, link.material, id);
          Quantity slack = std::numeric_limits<Quantity>::max();
          for (std::size_t n = static_cast<std::size_t>(d); n < N; ++n)
            slack = std::min(slack, now[n] - link.per_unit * cum_prod[n]);
          const Quantity take = std::min({release, cit->second, std::max<Quantity>(0, slack)});
          if (take <= 0)
            continue;
          add_to(committed, d, -take);
          release -= take;
        }
      }
    }
  }
  return world;
}

//==============================================================================
/// Stepwise negotiation. Construction applies the events; every step() runs
/// one synchronous round of four phases:
///
///   supply          every material agent checks its supply against its
///                   commitments and re-allocates when short
///   consolidation   agents that received proposals reconcile them, wave by
///                   wave from the deepest BOM level up to finished goods
///   capacity        capacity agents re-allocate overloaded lines
///   reconsolidation members cut by their line, and everything downstream
///                   of them, reconcile again
///
/// The run is stable after a round in which nothing changed.
class Negotiation
{
public:
  Negotiation(WorldState world, const std::vector<DisruptionEvent>& events, EngineConfig config)
  : _world(std::move(world)),
    _initial(_world),
    _config(std::move(config))
  {
    _config.horizon_days = _world.horizon;
    _config.validate();
    for (const auto& e : events)
    {
      const auto hit = trigger(_world, e);
      _triggered.insert(hit.begin(), hit.end());
    }
    _pending = !events.empty() || !check_feasibility(_world).empty();
  }

  /// True once a quiet round has been observed or the iteration bound hit.
  bool done() const { return !_pending || _round >= _config.max_iterations; }

  bool stabilized() const { return !_pending; }

  int rounds() const { return _round; }

  const WorldState& world() const { return _world; }

  const std::vector<TraceRecord>& trace() const { return _trace; }

  const std::vector<RoundSummary>& summaries() const { return _summaries; }

  const std::set<AgentId>& triggered() const { return _triggered; }

  /// Runs one round. Does nothing once done().
  RoundSummary step()
  {
    if (done())
      return {};
    ++_round;
    RoundSummary summary;
    summary.round = _round;

    Inboxes material_inbox;
    Inboxes capacity_inbox;

    // Supply phase.
    std::vector<AgentId> all_materials;
    for (const auto& [id, n] : _world.bom.nodes)
      all_materials.push_back(id);
    run_wave("supply", all_materials, material_inbox, capacity_inbox, summary, true);

    // Consolidation phase.
    run_levels("consolidation", material_inbox, capacity_inbox, summary);

    // Capacity phase. Proposals from materials were informational; every
    // package re-reads its members' production.
    capacity_inbox.clear();
    std::vector<AgentUpdate> updates;
    for (const auto& [id, pkg] : _world.packages)
      updates.push_back(capacity_agent_step(_world, id, {}, _config, _round));
    for (auto& u : updates)
      merge("capacity", std::move(u), {}, material_inbox, capacity_inbox, summary);

    // Reconsolidation phase.
    run_levels("reconsolidation", material_inbox, capacity_inbox, summary);

    _pending = summary.changed;
    _summaries.push_back(summary);
    return summary;
  }

  /// Runs the remaining rounds, settles order statuses at the horizon and
  /// optionally strips inventory.
  RunResult finish()
  {
    while (!done())
      step();

    RunResult result;
    result.stabilized = stabilized();
    result.iterations_used = _round;
    settle_orders();
    if (result.stabilized && _config.inventory_reduction_enabled)
      _world = inventory_reduction(std::move(_world));

    for (const auto& [id, node] : _world.bom.nodes)
    {
      if (schedule_changed(id))
      {
        result.affected_materials.insert(id);
        if (node.finished_good)
          result.affected_finished_goods.insert(id);
      }
    }
    for (const auto& [id, pkg] : _world.packages)
    {
      if (capacity_load(_world, pkg) != capacity_load(_initial, _initial.packages.at(id)))
        result.affected_capacities.insert(id);
    }

    result.world = _world;
    result.trace = _trace;
    result.rounds = _summaries;
    result.triggered = _triggered;
    return result;
  }

private:
  using Inboxes = std::map<AgentId, std::vector<ChangeProposal>>;

  bool schedule_changed(const AgentId& id) const
  {
    if (_world.supply.at(id).planned_production != _initial.supply.at(id).planned_production)
      return true;
    for (const auto* o : _world.outgoing(id))
      if (o->committed != _initial.orders.at(o->id).committed)
        return true;
    return false;
  }

  /// Evaluates `agents` against the current world, then merges their
  /// updates in id order.
  void run_wave(
    const std::string& phase,
    const std::vector<AgentId>& agents,
    Inboxes& material_inbox,
    Inboxes& capacity_inbox,
    RoundSummary& summary,
    bool everyone)
  {
    std::vector<std::pair<AgentId, std::vector<ChangeProposal>>> work;
    for (const auto& a : agents)
    {
      auto it = material_inbox.find(a);
      std::vector<ChangeProposal> inbox;
      if (it != material_inbox.end())
      {
        inbox = std::move(it->second);
        material_inbox.erase(it);
      }
      if (everyone || !inbox.empty())
        work.emplace_back(a, std::move(inbox));
    }

    std::vector<AgentUpdate> updates(work.size());
    if (_config.deterministic_order)
    {
      for (std::size_t i = 0; i < work.size(); ++i)
        updates[i] = material_agent_step(_world, work[i].first, work[i].second, _config, _round);
    }
    else
    {
      std::vector<std::future<AgentUpdate>> futures;
      for (const auto& [a, inbox] : work)
        futures.push_back(std::async(std::launch::async, [this, &a, &inbox]
          { return material_agent_step(_world, a, inbox, _config, _round); }));
      for (std::size_t i = 0; i < futures.size(); ++i)
        updates[i] = futures[i].get();
    }

    for (std::size_t i = 0; i < work.size(); ++i)
      merge(phase, std::move(updates[i]), work[i].second, material_inbox, capacity_inbox,
            summary);
  }

  void run_levels(
    const std::string& phase,
    Inboxes& material_inbox,
    Inboxes& capacity_inbox,
    RoundSummary& summary)
  {
    int deepest = 0;
    for (const auto& [id, n] : _world.bom.nodes)
      deepest = std::max(deepest, n.level);
    for (int level = deepest; level >= 0; --level)
    {
      std::vector<AgentId> agents;
      for (const auto& [id, n] : _world.bom.nodes)
        if (n.level == level)
          agents.push_back(id);
      run_wave(phase, agents, material_inbox, capacity_inbox, summary, false);
    }
  }

  void merge(
    const std::string& phase,
    AgentUpdate u,
    const std::vector<ChangeProposal>& inbox,
    Inboxes& material_inbox,
    Inboxes& capacity_inbox,
    RoundSummary& summary)
  {
    if (u.empty() && inbox.empty())
      return;

    TraceRecord rec;
    rec.round = _round;
    rec.phase = phase;
    rec.agent = u.agent;
    rec.proposals_in = inbox;
    rec.proposals_out = u.proposals;
    if (u.reduction)
      rec.reduction = u.reduction->r;

    if (u.production)
    {
      auto& prod = _world.supply.at(u.agent).planned_production;
      rec.production_delta = detail::delta_map(prod, *u.production);
      prod = *u.production;
    }
    for (auto& [oid, c] : u.commitments)
    {
      auto& committed = _world.orders.at(oid).committed;
      rec.commitment_deltas[oid] = detail::delta_map(committed, c);
      committed = std::move(c);
    }
    if (u.changes_schedule())
    {
      summary.rescheduled.insert(u.agent);
      summary.changed = true;
    }
    for (auto& p : u.proposals)
    {
      ++summary.proposals;
      summary.changed = true;
      auto& box = _world.is_package(p.to) ? capacity_inbox : material_inbox;
      auto& list = box[p.to];
      // A newer proposal from the same sender on the same order supersedes.
      std::erase_if(list, [&](const ChangeProposal& q)
        { return q.from == p.from && q.order == p.order; });
      list.push_back(std::move(p));
    }
    _trace.push_back(std::move(rec));
  }

  void settle_orders()
  {
    for (auto& [id, o] : _world.orders)
    {
      const Quantity wanted = total(o.demand);
      if (_config.fulfillment_mode == FulfillmentMode::all_or_nothing && o.external()
          && total(o.committed) < wanted)
        o.committed.clear();
      const Quantity got = total(o.committed);
      if (got == 0 && wanted > 0)
        o.status = OrderStatus::cancelled;
      else if (got < wanted)
        o.status = OrderStatus::partially_reduced;
      else
        o.status = OrderStatus::active;
    }
  }

  WorldState _world;
  WorldState _initial;
  EngineConfig _config;
  std::set<AgentId> _triggered;
  bool _pending = false;
  int _round = 0;
  std::vector<TraceRecord> _trace;
  std::vector<RoundSummary> _summaries;
};

/// Applies `events` and negotiates until no agent has anything left to
/// change, or max_iterations rounds have run.
inline RunResult run_until_stable(
  WorldState world,
  const std::vector<DisruptionEvent>& events,
  const EngineConfig& config)
{
  Negotiation n(std::move(world), events, config);
  return n.finish();
}

} // namespace resched

#endif // RESCHED__ENGINE_HPP
