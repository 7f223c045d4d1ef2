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

#ifndef RESCHED__SCENARIO_HPP
#define RESCHED__SCENARIO_HPP

#include <resched/domain.hpp>
#include <resched/engine.hpp>

#include <json.hpp>

#include <cmath>
#include <random>
#include <string_view>

namespace resched {

using json = nlohmann::json;

inline constexpr const char* scenario_version = "resched-scenario/1";

/// Everything a scenario file carries.
struct ScenarioFile
{
  std::string version = scenario_version;
  Day horizon_days = 14;
  std::vector<MaterialNode> materials;
  std::vector<CapacityPackage> packages;
  std::vector<Order> orders;
  std::map<AgentId, SupplyProfile> supply;
  std::vector<DisruptionEvent> events;
  EngineConfig config;
};

struct LoadedScenario
{
  WorldState world;
  std::vector<DisruptionEvent> events;
  EngineConfig config;
};

/// Sorted keys, no insignificant whitespace.
inline std::string dump_canonical(const json& j)
{
  return j.dump();
}

//==============================================================================
namespace io {

inline json day_map(const DayMap& m)
{
  json j = json::object();
  for (const auto& [d, q] : m)
    j[std::to_string(d)] = q;
  return j;
}

inline json to_json(const DisruptionEvent& e)
{
  return {
    {"kind", to_string(e.kind)},
    {"target", e.target},
    {"start_day", e.start_day},
    {"duration_days", e.duration_days},
    {"affected_quantity", e.affected_quantity ? json(*e.affected_quantity) : json(nullptr)}};
}

inline json to_json(const WeightConfig& w)
{
  json prio = json::object();
  for (const auto& [p, v] : w.priority_weight)
    prio[std::to_string(p)] = v;
  return {
    {"priority", prio},
    {"fulfillment", w.fulfillment_weight},
    {"adherence", w.adherence_weight},
    {"day_attenuation", w.day_attenuation}};
}

inline json to_json(const EngineConfig& c)
{
  return {
    {"max_iterations", c.max_iterations},
    {"fulfillment_mode", to_string(c.fulfillment_mode)},
    {"inventory_reduction", c.inventory_reduction_enabled},
    {"deterministic_order", c.deterministic_order},
    {"weights", to_json(c.weights)}};
}

inline json to_json(const SupplyProfile& s)
{
  json holds = json::array();
  for (const auto& h : s.output_holds)
    holds.push_back({{"start", h.start}, {"end", h.end},
                     {"quantity", h.quantity ? json(*h.quantity) : json(nullptr)}});
  return {
    {"in_stock", s.in_stock},
    {"in_transit", day_map(s.in_transit)},
    {"planned_production", day_map(s.planned_production)},
    {"output_holds", holds}};
}

inline json to_json(const Order& o)
{
  return {
    {"id", o.id},
    {"supplier", o.supplier},
    {"customer", o.customer},
    {"material", o.material},
    {"priority", o.priority},
    {"status", to_string(o.status)},
    {"demand", day_map(o.demand)},
    {"committed", day_map(o.committed)}};
}

inline json to_json(const ChangeProposal& p)
{
  return {{"from", p.from}, {"to", p.to}, {"order", p.order},
          {"deltas", day_map(p.deltas)}, {"round", p.round}};
}

inline json to_json(const TraceRecord& t)
{
  json in = json::array();
  for (const auto& p : t.proposals_in)
    in.push_back(to_json(p));
  json out = json::array();
  for (const auto& p : t.proposals_out)
    out.push_back(to_json(p));
  json commits = json::object();
  for (const auto& [oid, d] : t.commitment_deltas)
    commits[oid] = day_map(d);
  return {
    {"round", t.round},
    {"phase", t.phase},
    {"agent", t.agent},
    {"proposals_in", in},
    {"proposals_out", out},
    {"production_delta", day_map(t.production_delta)},
    {"commitment_deltas", commits},
    {"reduction", t.reduction ? day_map(*t.reduction) : json(nullptr)}};
}

inline json to_json(const RoundSummary& r)
{
  return {{"round", r.round}, {"proposals", r.proposals},
          {"rescheduled", r.rescheduled}, {"changed", r.changed}};
}

/// One canonical JSON record per line.
inline std::string trace_jsonl(const std::vector<TraceRecord>& trace)
{
  std::string out;
  for (const auto& t : trace)
  {
    out += to_json(t).dump();
    out += '\n';
  }
  return out;
}

//------------------------------------------------------------------------------
/// Typed accessors that report failures with a JSON pointer.
class Reader
{
public:
  static const json& field(const json& j, const std::string& key, const std::string& at)
  {
    if (!j.is_object())
      throw InputError(at, "expected an object");
    const auto it = j.find(key);
    if (it == j.end())
      throw InputError(at + "/" + key, "missing field");
    return *it;
  }

  static const json* optional(const json& j, const std::string& key)
  {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null())
      return nullptr;
    return &*it;
  }

  static std::string string(const json& j, const std::string& at)
  {
    if (!j.is_string())
      throw InputError(at, "expected a string");
    return j.get<std::string>();
  }

  static std::int64_t integer(const json& j, const std::string& at)
  {
    if (!j.is_number_integer())
      throw InputError(at, "expected an integer");
    return j.get<std::int64_t>();
  }

  static bool boolean(const json& j, const std::string& at)
  {
    if (!j.is_boolean())
      throw InputError(at, "expected a boolean");
    return j.get<bool>();
  }

  static const json& array(const json& j, const std::string& at)
  {
    if (!j.is_array())
      throw InputError(at, "expected an array");
    return j;
  }

  static Day day_key(const std::string& key, const std::string& at)
  {
    std::size_t used = 0;
    long v = 0;
    try
    {
      v = std::stol(key, &used);
    }
    catch (const std::exception&)
    {
      used = 0;
    }
    if (used != key.size() || key.empty())
      throw InputError(at, "day key '" + key + "' is not an integer");
    return static_cast<Day>(v);
  }

  static DayMap day_map(const json& j, const std::string& at)
  {
    if (!j.is_object())
      throw InputError(at, "expected an object of day -> quantity");
    DayMap m;
    for (const auto& [k, v] : j.items())
    {
      const Day d = day_key(k, at + "/" + k);
      const Quantity q = integer(v, at + "/" + k);
      if (q != 0)
        m[d] = q;
    }
    return m;
  }
};

inline DisruptionEvent event_from_json(const json& j, const std::string& at)
{
  DisruptionEvent e;
  const auto kind = Reader::string(Reader::field(j, "kind", at), at + "/kind");
  try
  {
    e.kind = disruption_kind_from_string(kind);
  }
  catch (const InputError& err)
  {
    throw InputError(at + "/kind", err.what());
  }
  e.target = Reader::string(Reader::field(j, "target", at), at + "/target");
  e.start_day = static_cast<Day>(
    Reader::integer(Reader::field(j, "start_day", at), at + "/start_day"));
  e.duration_days = static_cast<Day>(
    Reader::integer(Reader::field(j, "duration_days", at), at + "/duration_days"));
  if (const auto* q = Reader::optional(j, "affected_quantity"))
    e.affected_quantity = Reader::integer(*q, at + "/affected_quantity");
  return e;
}

inline EngineConfig config_from_json(const json& j, const std::string& at)
{
  EngineConfig c;
  if (!j.is_object())
    throw InputError(at, "expected an object");
  if (const auto* v = Reader::optional(j, "max_iterations"))
    c.max_iterations = static_cast<int>(Reader::integer(*v, at + "/max_iterations"));
  if (const auto* v = Reader::optional(j, "fulfillment_mode"))
  {
    try
    {
      c.fulfillment_mode = fulfillment_mode_from_string(
        Reader::string(*v, at + "/fulfillment_mode"));
    }
    catch (const InputError& e)
    {
      throw InputError(at + "/fulfillment_mode", e.what());
    }
  }
  if (const auto* v = Reader::optional(j, "inventory_reduction"))
    c.inventory_reduction_enabled = Reader::boolean(*v, at + "/inventory_reduction");
  if (const auto* v = Reader::optional(j, "deterministic_order"))
    c.deterministic_order = Reader::boolean(*v, at + "/deterministic_order");
  if (const auto* w = Reader::optional(j, "weights"))
  {
    const std::string wat = at + "/weights";
    if (const auto* p = Reader::optional(*w, "priority"))
      for (const auto& [k, v] : p->items())
        c.weights.priority_weight[Reader::day_key(k, wat + "/priority/" + k)] =
          Reader::integer(v, wat + "/priority/" + k);
    if (const auto* f = Reader::optional(*w, "fulfillment"))
      for (const auto& [k, v] : f->items())
        c.weights.fulfillment_weight[k] = Reader::integer(v, wat + "/fulfillment/" + k);
    if (const auto* l = Reader::optional(*w, "adherence"))
      for (const auto& [k, v] : l->items())
        c.weights.adherence_weight[k] = Reader::integer(v, wat + "/adherence/" + k);
    if (const auto* d = Reader::optional(*w, "day_attenuation"))
    {
      const auto& arr = Reader::array(*d, wat + "/day_attenuation");
      for (std::size_t i = 0; i < arr.size(); ++i)
        c.weights.day_attenuation.push_back(
          Reader::integer(arr[i], wat + "/day_attenuation/" + std::to_string(i)));
    }
  }
  if (c.max_iterations < 1)
    throw InputError(at + "/max_iterations", "must be at least 1");
  return c;
}

} // namespace io

//==============================================================================
inline json to_json(const ScenarioFile& s)
{
  json materials = json::array();
  for (const auto& m : s.materials)
  {
    json sup = json::array();
    for (const auto& l : m.suppliers)
      sup.push_back({{"material", l.material}, {"per_unit", l.per_unit}});
    materials.push_back({
      {"id", m.id},
      {"location", m.location},
      {"suppliers", sup},
      {"capacity_package", m.capacity_package ? json(*m.capacity_package) : json(nullptr)},
      {"substitutes", m.substitutes}});
  }
  json packages = json::array();
  for (const auto& p : s.packages)
    packages.push_back({{"id", p.id}, {"members", p.members},
                        {"capacity", io::day_map(p.profile.per_day)}});
  json orders = json::array();
  for (const auto& o : s.orders)
    orders.push_back(io::to_json(o));
  json supply = json::object();
  for (const auto& [id, sp] : s.supply)
    supply[id] = io::to_json(sp);
  json events = json::array();
  for (const auto& e : s.events)
    events.push_back(io::to_json(e));

  return {
    {"version", s.version},
    {"horizon_days", s.horizon_days},
    {"materials", materials},
    {"capacity_packages", packages},
    {"orders", orders},
    {"supply", supply},
    {"events", events},
    {"config", io::to_json(s.config)}};
}

/// Structural parse; referential checks happen in build_world().
inline ScenarioFile parse_scenario(const json& j)
{
  using io::Reader;
  ScenarioFile s;
  if (!j.is_object())
    throw InputError("", "scenario must be a JSON object");
  s.version = Reader::string(Reader::field(j, "version", ""), "/version");
  if (s.version != scenario_version)
    throw InputError("/version", "unsupported version '" + s.version + "'");
  s.horizon_days = static_cast<Day>(
    Reader::integer(Reader::field(j, "horizon_days", ""), "/horizon_days"));

  const auto& mats = Reader::array(Reader::field(j, "materials", ""), "/materials");
  for (std::size_t i = 0; i < mats.size(); ++i)
  {
    const std::string at = "/materials/" + std::to_string(i);
    MaterialNode m;
    m.id = Reader::string(Reader::field(mats[i], "id", at), at + "/id");
    if (const auto* loc = Reader::optional(mats[i], "location"))
      m.location = Reader::string(*loc, at + "/location");
    if (const auto* sup = Reader::optional(mats[i], "suppliers"))
    {
      Reader::array(*sup, at + "/suppliers");
      for (std::size_t k = 0; k < sup->size(); ++k)
      {
        const std::string lat = at + "/suppliers/" + std::to_string(k);
        SupplierLink l;
        l.material = Reader::string(Reader::field((*sup)[k], "material", lat), lat + "/material");
        if (const auto* pu = Reader::optional((*sup)[k], "per_unit"))
          l.per_unit = Reader::integer(*pu, lat + "/per_unit");
        m.suppliers.push_back(std::move(l));
      }
    }
    if (const auto* cp = Reader::optional(mats[i], "capacity_package"))
      m.capacity_package = Reader::string(*cp, at + "/capacity_package");
    if (const auto* subs = Reader::optional(mats[i], "substitutes"))
    {
      Reader::array(*subs, at + "/substitutes");
      for (std::size_t k = 0; k < subs->size(); ++k)
        m.substitutes.push_back(
          Reader::string((*subs)[k], at + "/substitutes/" + std::to_string(k)));
    }
    s.materials.push_back(std::move(m));
  }

  if (const auto* pk = Reader::optional(j, "capacity_packages"))
  {
    Reader::array(*pk, "/capacity_packages");
    for (std::size_t i = 0; i < pk->size(); ++i)
    {
      const std::string at = "/capacity_packages/" + std::to_string(i);
      CapacityPackage p;
      p.id = Reader::string(Reader::field((*pk)[i], "id", at), at + "/id");
      const auto& mem = Reader::array(Reader::field((*pk)[i], "members", at), at + "/members");
      for (std::size_t k = 0; k < mem.size(); ++k)
        p.members.push_back(Reader::string(mem[k], at + "/members/" + std::to_string(k)));
      p.profile.per_day = Reader::day_map(Reader::field((*pk)[i], "capacity", at),
                                          at + "/capacity");
      s.packages.push_back(std::move(p));
    }
  }

  const auto& ords = Reader::array(Reader::field(j, "orders", ""), "/orders");
  for (std::size_t i = 0; i < ords.size(); ++i)
  {
    const std::string at = "/orders/" + std::to_string(i);
    const json& oj = ords[i];
    Order o;
    o.id = Reader::string(Reader::field(oj, "id", at), at + "/id");
    o.supplier = Reader::string(Reader::field(oj, "supplier", at), at + "/supplier");
    o.customer = Reader::string(Reader::field(oj, "customer", at), at + "/customer");
    if (const auto* m = Reader::optional(oj, "material"))
      o.material = Reader::string(*m, at + "/material");
    if (const auto* p = Reader::optional(oj, "priority"))
      o.priority = static_cast<int>(Reader::integer(*p, at + "/priority"));
    if (const auto* st = Reader::optional(oj, "status"))
    {
      const auto v = Reader::string(*st, at + "/status");
      if (v == "active")
        o.status = OrderStatus::active;
      else if (v == "partially_reduced")
        o.status = OrderStatus::partially_reduced;
      else if (v == "cancelled")
        o.status = OrderStatus::cancelled;
      else
        throw InputError(at + "/status", "unknown status '" + v + "'");
    }
    o.demand = Reader::day_map(Reader::field(oj, "demand", at), at + "/demand");
    if (const auto* c = Reader::optional(oj, "committed"))
      o.committed = Reader::day_map(*c, at + "/committed");
    else
      o.committed = o.demand;
    s.orders.push_back(std::move(o));
  }

  if (const auto* sup = Reader::optional(j, "supply"))
  {
    if (!sup->is_object())
      throw InputError("/supply", "expected an object keyed by material id");
    for (const auto& [id, sj] : sup->items())
    {
      const std::string at = "/supply/" + id;
      SupplyProfile sp;
      if (const auto* v = Reader::optional(sj, "in_stock"))
        sp.in_stock = Reader::integer(*v, at + "/in_stock");
      if (const auto* v = Reader::optional(sj, "in_transit"))
        sp.in_transit = Reader::day_map(*v, at + "/in_transit");
      if (const auto* v = Reader::optional(sj, "planned_production"))
        sp.planned_production = Reader::day_map(*v, at + "/planned_production");
      if (const auto* v = Reader::optional(sj, "output_holds"))
      {
        Reader::array(*v, at + "/output_holds");
        for (std::size_t k = 0; k < v->size(); ++k)
        {
          const std::string hat = at + "/output_holds/" + std::to_string(k);
          OutputHold h;
          h.start = static_cast<Day>(Reader::integer(Reader::field((*v)[k], "start", hat),
                                                     hat + "/start"));
          h.end = static_cast<Day>(Reader::integer(Reader::field((*v)[k], "end", hat),
                                                   hat + "/end"));
          if (const auto* q = Reader::optional((*v)[k], "quantity"))
            h.quantity = Reader::integer(*q, hat + "/quantity");
          sp.output_holds.push_back(h);
        }
      }
      s.supply.emplace(id, std::move(sp));
    }
  }

  if (const auto* ev = Reader::optional(j, "events"))
  {
    Reader::array(*ev, "/events");
    for (std::size_t i = 0; i < ev->size(); ++i)
      s.events.push_back(io::event_from_json((*ev)[i], "/events/" + std::to_string(i)));
  }
  if (const auto* c = Reader::optional(j, "config"))
    s.config = io::config_from_json(*c, "/config");
  s.config.horizon_days = s.horizon_days;
  return s;
}

/// Builds and validates the world a scenario describes.
inline LoadedScenario load_scenario(const ScenarioFile& s)
{
  LoadedScenario out;
  out.world = build_world(s.materials, s.packages, s.orders, s.supply, s.horizon_days);
  for (std::size_t i = 0; i < s.events.size(); ++i)
  {
    try
    {
      validate(out.world, s.events[i]);
    }
    catch (const InputError& e)
    {
      throw InputError("/events/" + std::to_string(i) + e.where(), e.what());
    }
  }
  out.events = s.events;
  out.config = s.config;
  out.config.horizon_days = out.world.horizon;
  try
  {
    out.config.validate();
  }
  catch (const Error& e)
  {
    throw InputError("/config", e.what());
  }
  return out;
}

inline LoadedScenario load_scenario(std::string_view bytes)
{
  json j;
  try
  {
    j = json::parse(bytes.begin(), bytes.end());
  }
  catch (const json::parse_error& e)
  {
    throw InputError("", std::string("invalid JSON: ") + e.what());
  }
  return load_scenario(parse_scenario(j));
}

/// The scenario describing `w` as it is now.
inline ScenarioFile to_scenario(
  const WorldState& w,
  std::vector<DisruptionEvent> events = {},
  EngineConfig config = {})
{
  ScenarioFile s;
  s.horizon_days = w.horizon;
  for (const auto& [id, n] : w.bom.nodes)
  {
    MaterialNode m;
    m.id = n.id;
    m.location = n.location;
    m.suppliers = n.suppliers;
    m.capacity_package = n.capacity_package;
    m.substitutes = n.substitutes;
    s.materials.push_back(std::move(m));
  }
  for (const auto& [id, p] : w.packages)
    s.packages.push_back(p);
  for (const auto& [id, o] : w.orders)
    s.orders.push_back(o);
  s.supply = w.supply;
  s.events = std::move(events);
  s.config = std::move(config);
  s.config.horizon_days = w.horizon;
  return s;
}

inline std::string save_scenario(
  const WorldState& w,
  const std::vector<DisruptionEvent>& events = {},
  const EngineConfig& config = {})
{
  return dump_canonical(to_json(to_scenario(w, events, config)));
}

/// Parses `kind:target:start:duration[:quantity]`.
inline DisruptionEvent parse_event_spec(const std::string& spec)
{
  std::vector<std::string> parts;
  std::string cur;
  for (const char c : spec)
  {
    if (c == ':')
    {
      parts.push_back(cur);
      cur.clear();
    }
    else
    {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() < 4 || parts.size() > 5)
    throw InputError("--event", "expected kind:target:start:duration[:quantity], got '"
                     + spec + "'");
  auto number = [&](const std::string& s, const char* what) -> std::int64_t
    {
      std::size_t used = 0;
      std::int64_t v = 0;
      try
      {
        v = std::stoll(s, &used);
      }
      catch (const std::exception&)
      {
        used = 0;
      }
      if (s.empty() || used != s.size())
        throw InputError("--event", std::string(what) + " '" + s + "' is not an integer");
      return v;
    };
  DisruptionEvent e;
  try
  {
    e.kind = disruption_kind_from_string(parts[0]);
  }
  catch (const InputError& err)
  {
    throw InputError("--event", err.what());
  }
  e.target = parts[1];
  e.start_day = static_cast<Day>(number(parts[2], "start"));
  e.duration_days = static_cast<Day>(number(parts[3], "duration"));
  if (parts.size() == 5)
    e.affected_quantity = number(parts[4], "quantity");
  return e;
}

//==============================================================================
/// Finished goods and everything they consume, one group per connected BOM,
/// keyed by the smallest finished-good id in the group.
inline std::map<AgentId, std::set<AgentId>> bom_components(const WorldState& w)
{
  std::map<AgentId, AgentId> parent;
  for (const auto& [id, n] : w.bom.nodes)
    parent[id] = id;
  std::function<AgentId(const AgentId&)> find = [&](const AgentId& a) -> AgentId
    {
      if (parent[a] == a)
        return a;
      return parent[a] = find(parent[a]);
    };
  for (const auto& [id, n] : w.bom.nodes)
    for (const auto& l : n.suppliers)
    {
      const auto a = find(id);
      const auto b = find(l.material);
      if (a != b)
        parent[std::max(a, b)] = std::min(a, b);
    }

  std::map<AgentId, std::set<AgentId>> groups;
  for (const auto& [id, n] : w.bom.nodes)
    groups[find(id)].insert(id);

  std::map<AgentId, std::set<AgentId>> out;
  for (auto& [root, members] : groups)
  {
    AgentId key;
    for (const auto& m : members)
      if (w.bom.nodes.at(m).finished_good && (key.empty() || m < key))
        key = m;
    out[key.empty() ? root : key] = std::move(members);
  }
  return out;
}

/// Network days-on-hand: total stock over total average daily consumption
/// of the baseline commitments.
inline double days_on_hand(const WorldState& w)
{
  const auto& orders = w.baseline ? w.baseline->orders : w.orders;
  double stock = 0;
  double daily = 0;
  for (const auto& [id, n] : w.bom.nodes)
  {
    Quantity out = 0;
    for (const auto& [oid, o] : orders)
      if (o.supplier == id)
        out += total(o.committed);
    if (out == 0)
      continue;
    daily += static_cast<double>(out) / w.horizon;
    stock += static_cast<double>(w.supply.at(id).in_stock);
  }
  return daily > 0 ? stock / daily : 0.0;
}

//==============================================================================
struct GeneratorParams
{
  int boms = 5;
  int depth_min = 2;
  int depth_max = 7;
  int materials = 39;
  int capacities = 18;
  double days_on_hand = 6.7;

  /// Expected finished-good orders per day and finished good.
  double order_density = 2.0;

  /// Overrides the density when positive.
  int orders_per_fg = 0;

  Day horizon = 14;

  /// Spare line capacity over the average daily load.
  double capacity_headroom = 0.25;

  Quantity max_per_unit = 1;

  std::uint64_t seed = 1;
};

namespace detail {

/// Portable bounded draw; std::uniform_int_distribution differs between
/// standard libraries.
class Draw
{
public:
  explicit Draw(std::uint64_t seed) : _rng(seed) {}

  std::int64_t between(std::int64_t lo, std::int64_t hi)
  {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()
      - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t v = 0;
    do
    {
      v = _rng();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
  }

private:
  std::mt19937_64 _rng;
};

inline std::string padded(int v, int width = 2)
{
  std::string s = std::to_string(v);
  while (static_cast<int>(s.size()) < width)
    s.insert(s.begin(), '0');
  return s;
}

} // namespace detail

inline void validate(const GeneratorParams& p)
{
  if (p.boms < 1)
    throw InputError("--boms", "need at least one BOM");
  if (p.depth_min < 2)
    throw InputError("--depth-min", "BOM depth must be at least 2");
  if (p.depth_max < p.depth_min)
    throw InputError("--depth-max", "depth-max is below depth-min");
  if (p.horizon < 2)
    throw InputError("--horizon", "horizon must be at least 2 days");
  if (!(p.days_on_hand >= 0))
    throw InputError("--doh", "days-on-hand must not be negative");
  if (p.orders_per_fg < 0)
    throw InputError("--orders-per-fg", "must not be negative");
  if (p.orders_per_fg == 0 && !(p.order_density > 0))
    throw InputError("--order-density", "density must be positive when orders-per-fg is 0");
  if (p.capacity_headroom < 0)
    throw InputError("--headroom", "must not be negative");
  if (p.max_per_unit < 1)
    throw InputError("--max-per-unit", "must be at least 1");
}

/// Synthetic scenario of `boms` independent product groups with depths
/// spread over [depth_min, depth_max]. The baseline is feasible by
/// construction: production matches demand day by day with zero lead time,
/// raw materials arrive when consumed, every material holds
/// days_on_hand worth of its average daily consumption as stock, and every
/// line runs at its average load plus `capacity_headroom`, raised to the
/// planned load on busier days.
inline ScenarioFile generate_scenario(const GeneratorParams& p)
{
  validate(p);
  detail::Draw draw(p.seed);

  std::vector<int> depth(static_cast<std::size_t>(p.boms));
  for (int b = 0; b < p.boms; ++b)
  {
    const double t = p.boms == 1 ? 0.0 : static_cast<double>(b) / (p.boms - 1);
    depth[static_cast<std::size_t>(b)] =
      p.depth_min + static_cast<int>(std::lround(t * (p.depth_max - p.depth_min)));
  }
  int chain_nodes = 0;
  for (const int d : depth)
    chain_nodes += d;
  if (p.materials < chain_nodes)
    throw InputError("--materials", "need at least " + std::to_string(chain_nodes)
                     + " materials for the requested depths");

  // Tree per BOM: node 0 is the finished good; parent[i] is its customer.
  struct Tree
  {
    std::vector<int> parent;
    std::vector<int> level;
  };
  std::vector<Tree> trees(static_cast<std::size_t>(p.boms));
  for (int b = 0; b < p.boms; ++b)
  {
    auto& t = trees[static_cast<std::size_t>(b)];
    for (int l = 0; l < depth[static_cast<std::size_t>(b)]; ++l)
    {
      t.parent.push_back(l - 1);
      t.level.push_back(l);
    }
  }
  const int depth_sum = chain_nodes;
  for (int extra = 0; extra < p.materials - chain_nodes; ++extra)
  {
    // BOM chosen with probability proportional to its depth.
    std::int64_t pick = draw.between(0, depth_sum - 1);
    std::size_t b = 0;
    while (pick >= depth[b])
      pick -= depth[b++];
    auto& t = trees[b];
    const int lvl = static_cast<int>(draw.between(1, depth[b] - 1));
    std::vector<int> parents;
    for (std::size_t i = 0; i < t.level.size(); ++i)
      if (t.level[i] == lvl - 1)
        parents.push_back(static_cast<int>(i));
    const int par = parents[static_cast<std::size_t>(
      draw.between(0, static_cast<std::int64_t>(parents.size()) - 1))];
    t.parent.push_back(par);
    t.level.push_back(lvl);
  }

  // Name nodes by role.
  std::vector<std::vector<std::string>> ids(trees.size());
  std::vector<std::vector<bool>> produced(trees.size());
  int total_produced = 0;
  for (std::size_t b = 0; b < trees.size(); ++b)
  {
    const auto& t = trees[b];
    produced[b].assign(t.parent.size(), false);
    for (std::size_t i = 1; i < t.parent.size(); ++i)
      produced[b][static_cast<std::size_t>(t.parent[i])] = true;
    int rm = 0;
    int sfg = 0;
    const std::string prefix = "B" + std::to_string(b + 1) + "-";
    for (std::size_t i = 0; i < t.parent.size(); ++i)
    {
      if (i == 0)
        ids[b].push_back(prefix + "FG");
      else if (produced[b][i])
        ids[b].push_back(prefix + "SFG" + detail::padded(++sfg));
      else
        ids[b].push_back(prefix + "RM" + detail::padded(++rm));
      if (produced[b][i])
        ++total_produced;
    }
  }
  if (p.capacities < p.boms)
    throw InputError("--capacities", "every BOM needs at least one capacity package");
  if (p.capacities > total_produced)
    throw InputError("--capacities", "only " + std::to_string(total_produced)
                     + " produced materials can carry capacity packages");

  // Packages per BOM: one each, the rest by a largest-remainder share of
  // produced materials, never more packages than produced materials.
  std::vector<int> pkg_count(trees.size(), 1);
  int left = p.capacities - p.boms;
  while (left > 0)
  {
    std::size_t best = trees.size();
    double best_gap = -1;
    for (std::size_t b = 0; b < trees.size(); ++b)
    {
      int prod = 0;
      for (const bool x : produced[b])
        prod += x ? 1 : 0;
      if (pkg_count[b] >= prod)
        continue;
      const double gap = static_cast<double>(prod) / (pkg_count[b] + 1);
      if (gap > best_gap)
      {
        best_gap = gap;
        best = b;
      }
    }
    ++pkg_count[best];
    --left;
  }

  ScenarioFile s;
  s.horizon_days = p.horizon;
  s.config.horizon_days = p.horizon;
  std::map<AgentId, MaterialNode> nodes;
  std::map<AgentId, CapacityPackage> packages;
  for (std::size_t b = 0; b < trees.size(); ++b)
  {
    const auto& t = trees[b];
    const std::string site = "site-" + std::to_string(b + 1);
    for (std::size_t i = 0; i < t.parent.size(); ++i)
    {
      MaterialNode m;
      m.id = ids[b][i];
      m.location = site;
      nodes[m.id] = std::move(m);
    }
    for (std::size_t i = 1; i < t.parent.size(); ++i)
    {
      const Quantity per_unit = draw.between(1, p.max_per_unit);
      nodes[ids[b][static_cast<std::size_t>(t.parent[i])]].suppliers.push_back(
        {ids[b][i], per_unit});
    }

    // Produced materials by level; the first pkg_count get their own
    // package, the rest join a random one.
    std::vector<std::size_t> prod;
    for (std::size_t i = 0; i < t.parent.size(); ++i)
      if (produced[b][i] || i == 0)
        prod.push_back(i);
    std::stable_sort(prod.begin(), prod.end(),
      [&](std::size_t x, std::size_t y) { return t.level[x] < t.level[y]; });
    std::vector<std::string> pkg_ids;
    for (int k = 0; k < pkg_count[b]; ++k)
      pkg_ids.push_back("B" + std::to_string(b + 1) + "-CAP" + detail::padded(k + 1));
    for (std::size_t k = 0; k < prod.size(); ++k)
    {
      const std::string& pid = k < pkg_ids.size() ? pkg_ids[k]
        : pkg_ids[static_cast<std::size_t>(
            draw.between(0, static_cast<std::int64_t>(pkg_ids.size()) - 1))];
      auto& pkg = packages[pid];
      pkg.id = pid;
      pkg.members.push_back(ids[b][prod[k]]);
      nodes[ids[b][prod[k]]].capacity_package = pid;
    }
  }
  for (auto& [id, n] : nodes)
    std::sort(n.suppliers.begin(), n.suppliers.end(),
      [](const SupplierLink& a, const SupplierLink& b) { return a.material < b.material; });
  for (auto& [id, pkg] : packages)
    std::sort(pkg.members.begin(), pkg.members.end());

  // Finished-good demand.
  std::map<OrderId, Order> orders;
  for (std::size_t b = 0; b < trees.size(); ++b)
  {
    const AgentId& fg = ids[b][0];
    const int count = p.orders_per_fg > 0 ? p.orders_per_fg
      : std::max(1, static_cast<int>(std::lround(p.order_density * p.horizon)));
    for (int k = 0; k < count; ++k)
    {
      Order o;
      o.id = fg + "-O" + detail::padded(k + 1);
      o.supplier = fg;
      o.customer = external_customer;
      o.material = fg;
      o.priority = static_cast<int>(draw.between(1, 3));
      const Day day = static_cast<Day>(draw.between(1, p.horizon - 1));
      o.demand[day] = draw.between(10, 40);
      o.committed = o.demand;
      orders[o.id] = std::move(o);
    }
  }

  // Baseline production and internal orders, finished goods first.
  std::map<AgentId, int> level_of;
  for (std::size_t b = 0; b < trees.size(); ++b)
    for (std::size_t i = 0; i < trees[b].level.size(); ++i)
      level_of[ids[b][i]] = trees[b].level[i];
  std::vector<AgentId> by_level;
  for (const auto& [id, n] : nodes)
    by_level.push_back(id);
  std::stable_sort(by_level.begin(), by_level.end(),
    [&](const AgentId& a, const AgentId& b) { return level_of[a] < level_of[b]; });

  std::map<AgentId, Series> outflow;
  for (const auto& [id, o] : orders)
  {
    auto& s_out = outflow[o.supplier];
    s_out.resize(static_cast<std::size_t>(p.horizon), 0);
    for (const auto& [d, q] : o.demand)
      s_out[static_cast<std::size_t>(d)] += q;
  }
  for (const auto& id : by_level)
  {
    auto& out = outflow[id];
    out.resize(static_cast<std::size_t>(p.horizon), 0);
    const auto& node = nodes[id];
    SupplyProfile sp;
    if (node.suppliers.empty())
    {
      sp.in_transit = to_day_map(out);
    }
    else
    {
      sp.planned_production = to_day_map(out);
      for (const auto& l : node.suppliers)
      {
        Order o;
        o.id = l.material + ">" + id;
        o.supplier = l.material;
        o.customer = id;
        o.material = l.material;
        Series need(out.size(), 0);
        for (std::size_t n = 0; n < out.size(); ++n)
          need[n] = out[n] * l.per_unit;
        o.demand = to_day_map(need);
        o.committed = o.demand;
        int prio = 1;
        for (const auto& [oid, other] : orders)
          if (other.supplier == id)
            prio = std::max(prio, other.priority);
        o.priority = prio;
        auto& s_out = outflow[l.material];
        s_out.resize(out.size(), 0);
        for (std::size_t n = 0; n < out.size(); ++n)
          s_out[n] += need[n];
        orders[o.id] = std::move(o);
      }
    }
    const Quantity volume = total(to_day_map(out));
    sp.in_stock = std::llround(p.days_on_hand * static_cast<double>(volume) / p.horizon);
    s.supply[id] = std::move(sp);
  }

  for (auto& [id, pkg] : packages)
  {
    Series load(static_cast<std::size_t>(p.horizon), 0);
    for (const auto& m : pkg.members)
    {
      const auto prod = to_series(s.supply[m].planned_production, p.horizon);
      for (std::size_t n = 0; n < load.size(); ++n)
        load[n] += prod[n];
    }
    const double average = static_cast<double>(total(to_day_map(load))) / p.horizon;
    const auto base = std::max<Quantity>(
      1, static_cast<Quantity>(std::ceil(average * (1.0 + p.capacity_headroom))));
    for (Day d = 0; d < p.horizon; ++d)
      pkg.profile.per_day[d] = std::max(base, load[static_cast<std::size_t>(d)]);
  }

  for (auto& [id, n] : nodes)
    s.materials.push_back(std::move(n));
  for (auto& [id, pkg] : packages)
    s.packages.push_back(std::move(pkg));
  for (auto& [id, o] : orders)
    s.orders.push_back(std::move(o));
  return s;
}

//==============================================================================
/// One event of `kind` per BOM, aimed at the agent carrying the most volume
/// of the right type: the busiest raw material for a delay, the busiest
/// semi-finished good for a quarantine (the finished good when the BOM has
/// none), the busiest line for a stoppage.
inline std::vector<DisruptionEvent> events_per_bom(
  const WorldState& w,
  DisruptionKind kind,
  Day start_day,
  Day duration_days)
{
  std::vector<DisruptionEvent> out;
  for (const auto& [root, members] : bom_components(w))
  {
    AgentId target;
    Quantity best = -1;
    auto consider = [&](const AgentId& id, Quantity volume)
      {
        if (volume > best)
        {
          best = volume;
          target = id;
        }
      };
    switch (kind)
    {
      case DisruptionKind::raw_material_delay:
        for (const auto& m : members)
          if (w.bom.nodes.at(m).is_raw())
            consider(m, total(w.supply.at(m).in_transit));
        break;
      case DisruptionKind::sfg_quarantine:
        for (const auto& m : members)
        {
          const auto& n = w.bom.nodes.at(m);
          if (!n.is_raw() && !n.finished_good)
            consider(m, total(w.supply.at(m).planned_production));
        }
        if (target.empty())
          target = root;
        break;
      case DisruptionKind::line_stoppage:
        for (const auto& [pid, pkg] : w.packages)
        {
          if (pkg.members.empty() || !members.count(pkg.members.front()))
            continue;
          Quantity load = 0;
          for (const auto q : capacity_load(w, pkg))
            load += q;
          consider(pid, load);
        }
        break;
    }
    if (!target.empty())
      out.push_back({kind, target, start_day, duration_days, std::nullopt});
  }
  return out;
}

} // namespace resched

#endif // RESCHED__SCENARIO_HPP
