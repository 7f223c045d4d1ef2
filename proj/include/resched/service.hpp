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

#ifndef RESCHED__SERVICE_HPP
#define RESCHED__SERVICE_HPP

#include <resched/metrics.hpp>
#include <resched/scenario.hpp>

#include <memory>
#include <mutex>

namespace resched {

/// Status code plus JSON body, independent of any HTTP library.
struct Response
{
  int status = 200;
  json body;
};

//==============================================================================
/// Planner changes to the inputs of a session. They edit the scenario the
/// session started from and the recorded disruptions are replayed on top,
/// because a negotiation only ever degrades schedules and could not use the
/// slack an intervention adds.
struct Intervention
{
  enum class Type { priority_change, capacity_increase, expedite_arrival };

  Type type = Type::priority_change;
  std::string target;
  int priority = 0;
  Day start_day = 0;
  Day duration_days = 1;
  Day from_day = 0;
  Day to_day = 0;
  std::optional<Quantity> quantity;
};

inline Intervention intervention_from_json(const json& j)
{
  using io::Reader;
  Intervention iv;
  const auto type = Reader::string(Reader::field(j, "type", ""), "/type");
  if (type == "priority_change")
  {
    iv.type = Intervention::Type::priority_change;
    iv.target = Reader::string(Reader::field(j, "order", ""), "/order");
    iv.priority = static_cast<int>(Reader::integer(Reader::field(j, "priority", ""), "/priority"));
  }
  else if (type == "capacity_increase")
  {
    iv.type = Intervention::Type::capacity_increase;
    iv.target = Reader::string(Reader::field(j, "package", ""), "/package");
    iv.start_day = static_cast<Day>(
      Reader::integer(Reader::field(j, "start_day", ""), "/start_day"));
    iv.duration_days = static_cast<Day>(
      Reader::integer(Reader::field(j, "duration_days", ""), "/duration_days"));
    iv.quantity = Reader::integer(Reader::field(j, "quantity", ""), "/quantity");
  }
  else if (type == "expedite_arrival")
  {
    iv.type = Intervention::Type::expedite_arrival;
    iv.target = Reader::string(Reader::field(j, "material", ""), "/material");
    iv.from_day = static_cast<Day>(
      Reader::integer(Reader::field(j, "from_day", ""), "/from_day"));
    iv.to_day = static_cast<Day>(Reader::integer(Reader::field(j, "to_day", ""), "/to_day"));
    if (const auto* q = Reader::optional(j, "quantity"))
      iv.quantity = Reader::integer(*q, "/quantity");
  }
  else
  {
    throw InputError("/type", "unknown intervention '" + type + "'");
  }
  return iv;
}

/// Applies `iv` to the scenario inputs.
inline void apply_intervention(ScenarioFile& s, const Intervention& iv)
{
  switch (iv.type)
  {
    case Intervention::Type::priority_change:
    {
      if (iv.priority < 1)
        throw InputError("/priority", "priority must be at least 1");
      for (auto& o : s.orders)
        if (o.id == iv.target)
        {
          o.priority = iv.priority;
          return;
        }
      throw InputError("/order", "unknown order '" + iv.target + "'");
    }
    case Intervention::Type::capacity_increase:
    {
      if (!iv.quantity || *iv.quantity <= 0)
        throw InputError("/quantity", "capacity increase must be positive");
      if (iv.duration_days < 1 || iv.start_day < 0 || iv.start_day >= s.horizon_days)
        throw InputError("/start_day", "window outside the horizon");
      for (auto& p : s.packages)
        if (p.id == iv.target)
        {
          const Day end = std::min(s.horizon_days, iv.start_day + iv.duration_days);
          for (Day d = iv.start_day; d < end; ++d)
            p.profile.per_day[d] += *iv.quantity;
          return;
        }
      throw InputError("/package", "unknown capacity package '" + iv.target + "'");
    }
    case Intervention::Type::expedite_arrival:
    {
      const auto it = s.supply.find(iv.target);
      if (it == s.supply.end())
        throw InputError("/material", "unknown material '" + iv.target + "'");
      if (iv.to_day < 0 || iv.to_day > iv.from_day)
        throw InputError("/to_day", "an expedited arrival must move earlier");
      auto& transit = it->second.in_transit;
      const auto arrival = transit.find(iv.from_day);
      if (arrival == transit.end())
        throw InputError("/from_day", "no arrival on day " + std::to_string(iv.from_day));
      const Quantity moved = std::min(arrival->second, iv.quantity.value_or(arrival->second));
      if (moved <= 0)
        throw InputError("/quantity", "expedited quantity must be positive");
      arrival->second -= moved;
      if (arrival->second == 0)
        transit.erase(arrival);
      transit[iv.to_day] += moved;
      return;
    }
  }
}

//==============================================================================
inline json world_view(const WorldState& w)
{
  json agents = json::object();
  for (const auto& [id, n] : w.bom.nodes)
  {
    agents[id] = {
      {"level", n.level},
      {"finished_good", n.finished_good},
      {"raw", n.is_raw()},
      {"supply", availability_curve(w, id)},
      {"demand", commitment_curve(w, id)},
      {"production", to_series(w.supply.at(id).planned_production, w.horizon)}};
  }
  json capacities = json::object();
  for (const auto& [id, p] : w.packages)
  {
    Series cap(static_cast<std::size_t>(w.horizon), 0);
    for (Day d = 0; d < w.horizon; ++d)
      cap[static_cast<std::size_t>(d)] = p.profile.on(d);
    capacities[id] = {{"capacity", cap}, {"load", capacity_load(w, p)}, {"members", p.members}};
  }
  return {{"scenario", to_json(to_scenario(w))}, {"agents", agents}, {"capacities", capacities}};
}

/// Schedule deltas from `base` to `w`, changed agents only.
inline json schedule_diff(const WorldState& base, const WorldState& w)
{
  json materials = json::object();
  for (const auto& [id, n] : w.bom.nodes)
  {
    json entry = json::object();
    const auto prod = detail::delta_map(base.supply.at(id).planned_production,
                                        w.supply.at(id).planned_production);
    if (!prod.empty())
      entry["production"] = io::day_map(prod);
    json orders = json::object();
    for (const auto* o : w.outgoing(id))
    {
      const auto d = detail::delta_map(base.orders.at(o->id).committed, o->committed);
      if (!d.empty())
        orders[o->id] = io::day_map(d);
    }
    if (!orders.empty())
      entry["orders"] = orders;
    if (!entry.empty())
      materials[id] = entry;
  }
  json capacities = json::object();
  for (const auto& [id, p] : w.packages)
  {
    const auto d = detail::delta_map(to_day_map(capacity_load(base, base.packages.at(id))),
                                     to_day_map(capacity_load(w, p)));
    if (!d.empty())
      capacities[id] = {{"load", io::day_map(d)}};
  }
  return {{"materials", materials}, {"capacities", capacities}};
}

inline json run_summary(const RunResult& r, const KpiReport& k)
{
  json rounds = json::array();
  for (const auto& s : r.rounds)
    rounds.push_back(io::to_json(s));
  return {
    {"stabilized", r.stabilized},
    {"iterations", r.iterations_used},
    {"kpis", to_json(k)},
    {"triggered", r.triggered},
    {"affected",
     {{"materials", r.affected_materials},
      {"capacities", r.affected_capacities},
      {"finished_goods", r.affected_finished_goods}}},
    {"rounds", rounds}};
}

//==============================================================================
/// In-memory sessions behind the HTTP API. Every mutation of a session is
/// serialized by its run mutex; readers only take a short lock to copy the
/// last published view, so they never wait for a negotiation.
class ApiService
{
public:
  using Query = std::map<std::string, std::string>;

  Response handle(
    const std::string& method,
    const std::string& path,
    const Query& query,
    const std::string& body)
  {
    try
    {
      return route(method, path, query, body);
    }
    catch (const InfeasibleError& e)
    {
      return error(422, e.what());
    }
    catch (const InputError& e)
    {
      return {400, {{"error", e.what()}, {"pointer", e.where()}}};
    }
    catch (const std::exception& e)
    {
      return error(500, e.what());
    }
  }

  std::size_t session_count() const
  {
    std::lock_guard lock(_sessions_mutex);
    return _sessions.size();
  }

private:
  struct Run
  {
    WorldState world;
    RunResult result;
    KpiReport kpis;
  };

  /// Inputs plus recorded disruptions; the world is a pure function of it.
  struct History
  {
    ScenarioFile inputs;
    std::vector<std::vector<DisruptionEvent>> disruptions;
    json log = json::array();
  };

  struct View
  {
    WorldState baseline;
    Run committed;
    std::optional<Run> sandbox;
    json log;
    std::vector<TraceRecord> live_trace;
    std::optional<int> live_round;
  };

  struct Stepper
  {
    std::unique_ptr<Negotiation> negotiation;
    std::vector<DisruptionEvent> events;
    bool sandbox = false;
  };

  struct Session
  {
    std::string id;
    std::mutex run_mutex;
    History history;
    std::optional<History> staged;
    std::optional<Stepper> stepper;

    mutable std::mutex view_mutex;
    std::shared_ptr<const View> view;

    std::shared_ptr<const View> read() const
    {
      std::lock_guard lock(view_mutex);
      return view;
    }

    void publish(std::shared_ptr<const View> v)
    {
      std::lock_guard lock(view_mutex);
      view = std::move(v);
    }
  };

  static Response error(int status, const std::string& what)
  {
    return {status, {{"error", what}}};
  }

  static bool flag(const Query& q, const std::string& key)
  {
    const auto it = q.find(key);
    return it != q.end() && (it->second == "true" || it->second == "1");
  }

  static std::vector<std::string> split(const std::string& path)
  {
    std::vector<std::string> parts;
    std::string cur;
    for (const char c : path)
    {
      if (c == '/')
      {
        if (!cur.empty())
          parts.push_back(std::move(cur));
        cur.clear();
      }
      else
      {
        cur += c;
      }
    }
    if (!cur.empty())
      parts.push_back(std::move(cur));
    return parts;
  }

  static json parse_body(const std::string& body)
  {
    try
    {
      return json::parse(body);
    }
    catch (const json::parse_error& e)
    {
      throw InputError("", std::string("invalid JSON: ") + e.what());
    }
  }

  /// Folds the recorded disruptions over the inputs.
  static Run replay(const History& h)
  {
    const auto loaded = load_scenario(h.inputs);
    Run run;
    run.world = loaded.world;
    run.result.world = loaded.world;
    run.result.stabilized = true;
    for (const auto& events : h.disruptions)
    {
      run.result = run_until_stable(run.world, events, loaded.config);
      run.world = run.result.world;
    }
    run.kpis = compute_kpis(loaded.world, run.result);
    return run;
  }

  static Run finish_run(const History& h, RunResult result)
  {
    Run run;
    run.world = result.world;
    run.kpis = compute_kpis(load_scenario(h.inputs).world, result);
    run.result = std::move(result);
    return run;
  }

  void publish(Session& s, std::optional<Run> committed, std::optional<Run> sandbox)
  {
    auto old = s.read();
    auto v = std::make_shared<View>();
    v->baseline = load_scenario(s.history.inputs).world;
    v->committed = committed ? std::move(*committed) : old->committed;
    v->sandbox = std::move(sandbox);
    v->log = s.history.log;
    s.publish(std::move(v));
  }

  std::shared_ptr<Session> find(const std::string& id) const
  {
    std::lock_guard lock(_sessions_mutex);
    const auto it = _sessions.find(id);
    return it == _sessions.end() ? nullptr : it->second;
  }

  Response route(
    const std::string& method,
    const std::string& path,
    const Query& query,
    const std::string& body)
  {
    const auto parts = split(path);
    if (parts.empty() || parts[0] != "sessions")
      return error(404, "no such endpoint");
    if (parts.size() == 1)
    {
      if (method != "POST")
        return error(405, "use POST to create a session");
      return create(body);
    }

    const auto session = find(parts[1]);
    if (!session)
      return error(404, "unknown session '" + parts[1] + "'");
    const std::string what = parts.size() > 2 ? parts[2] : "";
    const std::string sub = parts.size() > 3 ? parts[3] : "";

    if (method == "GET" && parts.size() == 3)
      return read(*session, what, flag(query, "sandbox"));
    if (method != "POST")
      return error(405, "method not allowed");
    if (what == "disruptions" && parts.size() == 3)
      return disrupt(*session, parse_body(body), flag(query, "sandbox"), flag(query, "stepwise"));
    if (what == "interventions" && parts.size() == 3)
      return intervene(*session, parse_body(body), flag(query, "sandbox"));
    if (what == "step" && parts.size() == 3)
      return step(*session);
    if (what == "sandbox" && (sub == "commit" || sub == "discard") && parts.size() == 4)
      return resolve_sandbox(*session, sub == "commit");
    return error(404, "no such endpoint");
  }

  Response create(const std::string& body)
  {
    auto file = parse_scenario(parse_body(body));
    auto loaded = load_scenario(file);
    file.events.clear();

    auto session = std::make_shared<Session>();
    session->history.inputs = std::move(file);
    // Events carried by the file count as the first disruption.
    if (!loaded.events.empty())
    {
      session->history.disruptions.push_back(loaded.events);
      json evs = json::array();
      for (const auto& e : loaded.events)
        evs.push_back(io::to_json(e));
      session->history.log.push_back({{"type", "disruption"}, {"events", evs}});
    }
    auto v = std::make_shared<View>();
    v->baseline = loaded.world;
    v->committed = replay(session->history);
    v->log = session->history.log;
    session->publish(std::move(v));

    std::lock_guard lock(_sessions_mutex);
    session->id = "s" + std::to_string(++_next_id);
    _sessions[session->id] = session;
    const auto out = session->read();
    return {201, {{"id", session->id},
                  {"stabilized", out->committed.result.stabilized},
                  {"kpis", to_json(out->committed.kpis)}}};
  }

  Response read(const Session& s, const std::string& what, bool sandbox)
  {
    const auto v = s.read();
    const Run* run = &v->committed;
    if (sandbox)
    {
      if (!v->sandbox)
        return error(409, "no staged sandbox run");
      run = &*v->sandbox;
    }

    if (what == "world")
      return {200, world_view(run->world)};
    if (what == "kpis")
    {
      json out = {{"committed", to_json(v->committed.kpis)}};
      out["sandbox"] = v->sandbox ? to_json(v->sandbox->kpis) : json(nullptr);
      return {200, out};
    }
    if (what == "trace")
    {
      json records = json::array();
      for (const auto& t : run->result.trace)
        records.push_back(io::to_json(t));
      json live = json::array();
      for (const auto& t : v->live_trace)
        live.push_back(io::to_json(t));
      return {200, {{"records", records},
                    {"summary", run_summary(run->result, run->kpis)},
                    {"in_progress",
                     v->live_round ? json{{"round", *v->live_round}, {"records", live}}
                                   : json(nullptr)}}};
    }
    if (what == "diff")
      return {200, schedule_diff(v->baseline, run->world)};
    if (what == "history")
      return {200, {{"entries", v->log}}};
    return error(404, "no such endpoint");
  }

  static std::vector<DisruptionEvent> events_from(const json& j, const WorldState& w)
  {
    std::vector<DisruptionEvent> events;
    if (j.is_array())
    {
      for (std::size_t i = 0; i < j.size(); ++i)
        events.push_back(io::event_from_json(j[i], "/" + std::to_string(i)));
    }
    else
    {
      events.push_back(io::event_from_json(j, ""));
    }
    for (std::size_t i = 0; i < events.size(); ++i)
    {
      try
      {
        validate(w, events[i]);
      }
      catch (const InputError& e)
      {
        throw InputError((j.is_array() ? "/" + std::to_string(i) : "") + e.where(), e.what());
      }
    }
    return events;
  }

  Response disrupt(Session& s, const json& body, bool sandbox, bool stepwise)
  {
    std::lock_guard lock(s.run_mutex);
    if (s.stepper)
      return error(409, "a stepwise run is in progress");
    const auto v = s.read();
    const auto events = events_from(body, v->committed.world);
    const auto config = load_scenario(s.history.inputs).config;

    if (stepwise)
    {
      Stepper st;
      st.events = events;
      st.sandbox = sandbox;
      st.negotiation = std::make_unique<Negotiation>(v->committed.world, events, config);
      s.stepper = std::move(st);
      auto nv = std::make_shared<View>(*v);
      nv->live_round = 0;
      nv->live_trace.clear();
      s.publish(std::move(nv));
      return {202, {{"staged", true}, {"round", 0}, {"sandbox", sandbox}}};
    }

    auto result = run_until_stable(v->committed.world, events, config);
    return record(s, events, std::move(result), sandbox);
  }

  /// Stores a finished disruption run as committed or staged.
  Response record(
    Session& s,
    const std::vector<DisruptionEvent>& events,
    RunResult result,
    bool sandbox)
  {
    History next = s.history;
    next.disruptions.push_back(events);
    json evs = json::array();
    for (const auto& e : events)
      evs.push_back(io::to_json(e));
    next.log.push_back({{"type", "disruption"}, {"events", evs}});

    auto run = finish_run(next, std::move(result));
    json out = run_summary(run.result, run.kpis);
    out["sandbox"] = sandbox;
    if (sandbox)
    {
      s.staged = std::move(next);
      publish(s, std::nullopt, std::move(run));
    }
    else
    {
      s.history = std::move(next);
      s.staged.reset();
      publish(s, std::move(run), std::nullopt);
    }
    return {200, out};
  }

  Response intervene(Session& s, const json& body, bool sandbox)
  {
    std::lock_guard lock(s.run_mutex);
    if (s.stepper)
      return error(409, "a stepwise run is in progress");
    const auto iv = intervention_from_json(body);
    History next = s.history;
    apply_intervention(next.inputs, iv);
    next.log.push_back({{"type", "intervention"}, {"intervention", body}});

    auto run = replay(next);
    json out = run_summary(run.result, run.kpis);
    out["sandbox"] = sandbox;
    if (sandbox)
    {
      s.staged = std::move(next);
      publish(s, std::nullopt, std::move(run));
    }
    else
    {
      s.history = std::move(next);
      s.staged.reset();
      publish(s, std::move(run), std::nullopt);
    }
    return {200, out};
  }

  Response step(Session& s)
  {
    std::unique_lock lock(s.run_mutex, std::try_to_lock);
    if (!lock.owns_lock())
      return error(409, "a run is in progress");
    if (!s.stepper)
      return error(409, "no staged stepwise run");

    auto& n = *s.stepper->negotiation;
    const auto before = n.trace().size();
    const auto summary = n.step();
    std::vector<TraceRecord> records(n.trace().begin() + static_cast<std::ptrdiff_t>(before),
                                     n.trace().end());
    json recs = json::array();
    for (const auto& t : records)
      recs.push_back(io::to_json(t));
    json out = {{"round", n.rounds()}, {"summary", io::to_json(summary)},
                {"records", recs}, {"done", n.done()}};

    if (!n.done())
    {
      auto nv = std::make_shared<View>(*s.read());
      nv->live_round = n.rounds();
      nv->live_trace = n.trace();
      s.publish(std::move(nv));
      return {200, out};
    }

    auto st = std::move(*s.stepper);
    s.stepper.reset();
    auto result = st.negotiation->finish();
    const auto recorded = record(s, st.events, std::move(result), st.sandbox);
    out["result"] = recorded.body;
    return {200, out};
  }

  Response resolve_sandbox(Session& s, bool commit)
  {
    std::lock_guard lock(s.run_mutex);
    const auto v = s.read();
    if (!s.staged || !v->sandbox)
      return error(409, "no staged sandbox run");
    if (commit)
    {
      s.history = std::move(*s.staged);
      s.staged.reset();
      auto run = *v->sandbox;
      publish(s, std::move(run), std::nullopt);
    }
    else
    {
      s.staged.reset();
      publish(s, std::nullopt, std::nullopt);
    }
    return {200, {{"committed", commit}, {"kpis", to_json(s.read()->committed.kpis)}}};
  }

  mutable std::mutex _sessions_mutex;
  std::map<std::string, std::shared_ptr<Session>> _sessions;
  std::uint64_t _next_id = 0;
};

} // namespace resched

#endif // RESCHED__SERVICE_HPP
