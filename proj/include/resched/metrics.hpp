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

#ifndef RESCHED__METRICS_HPP
#define RESCHED__METRICS_HPP

#include <resched/engine.hpp>
#include <resched/scenario.hpp>

#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

namespace resched {

struct KpiReport
{
  int iterations = 0;
  int rescheduled_material_agents = 0;
  int rescheduled_capacity_agents = 0;
  int rescheduled_finished_goods = 0;
  double fg_fulfillment_by_orders = 1.0;
  double fg_fulfillment_by_volume = 1.0;
  int max_delay_days = 0;

  bool operator==(const KpiReport&) const = default;
};

/// First day on which `committed` has delivered `amount` in total.
inline std::optional<Day> completion_day(const DayMap& committed, Quantity amount)
{
  Quantity cum = 0;
  for (const auto& [d, q] : committed)
  {
    cum += q;
    if (cum >= amount)
      return d;
  }
  if (amount <= 0)
    return Day{0};
  return std::nullopt;
}

/// Compares the final world of a run with the baseline it started from.
/// An external order counts as fulfilled when its full demand is committed
/// within the horizon; delay is measured on the day the last unit arrives.
inline KpiReport compute_kpis(const WorldState& baseline, const RunResult& result)
{
  const WorldState& w = result.world;
  if (baseline.orders.size() != w.orders.size()
      || baseline.bom.nodes.size() != w.bom.nodes.size()
      || baseline.packages.size() != w.packages.size())
    throw InputError("", "baseline and result describe different worlds");
  for (const auto& [id, o] : baseline.orders)
    if (!w.orders.count(id))
      throw InputError("", "order '" + id + "' missing from the result");
  for (const auto& [id, n] : baseline.bom.nodes)
    if (!w.bom.nodes.count(id))
      throw InputError("", "material '" + id + "' missing from the result");
  for (const auto& [id, p] : baseline.packages)
    if (!w.packages.count(id))
      throw InputError("", "capacity package '" + id + "' missing from the result");

  KpiReport k;
  k.iterations = result.iterations_used;

  for (const auto& [id, node] : w.bom.nodes)
  {
    bool changed = w.supply.at(id).planned_production
      != baseline.supply.at(id).planned_production;
    for (const auto* o : w.outgoing(id))
      changed = changed || o->committed != baseline.orders.at(o->id).committed;
    if (!changed)
      continue;
    ++k.rescheduled_material_agents;
    if (node.finished_good)
      ++k.rescheduled_finished_goods;
  }
  for (const auto& [id, pkg] : w.packages)
    if (capacity_load(w, pkg) != capacity_load(baseline, baseline.packages.at(id)))
      ++k.rescheduled_capacity_agents;

  int fg_orders = 0;
  int fulfilled = 0;
  Quantity base_volume = 0;
  Quantity volume = 0;
  for (const auto& [id, base] : baseline.orders)
  {
    if (!base.external())
      continue;
    const Order& o = w.orders.at(id);
    const Quantity wanted = total(base.demand);
    const Quantity got = total(o.committed);
    ++fg_orders;
    base_volume += total(base.committed);
    volume += std::min(got, wanted);
    if (got < wanted)
      continue;
    ++fulfilled;
    const auto before = completion_day(base.committed, wanted);
    const auto after = completion_day(o.committed, wanted);
    if (before && after)
      k.max_delay_days = std::max(k.max_delay_days, static_cast<int>(*after - *before));
  }
  if (fg_orders > 0)
    k.fg_fulfillment_by_orders = static_cast<double>(fulfilled) / fg_orders;
  if (base_volume > 0)
    k.fg_fulfillment_by_volume =
      std::min(1.0, static_cast<double>(volume) / static_cast<double>(base_volume));
  return k;
}

inline json to_json(const KpiReport& k)
{
  return {
    {"iterations", k.iterations},
    {"rescheduled_material_agents", k.rescheduled_material_agents},
    {"rescheduled_capacity_agents", k.rescheduled_capacity_agents},
    {"rescheduled_fgs", k.rescheduled_finished_goods},
    {"fg_fulfillment_by_orders", k.fg_fulfillment_by_orders},
    {"fg_fulfillment_by_volume", k.fg_fulfillment_by_volume},
    {"max_delay_days", k.max_delay_days}};
}

//==============================================================================
struct SweepGrid
{
  std::vector<DisruptionKind> kinds = {
    DisruptionKind::line_stoppage,
    DisruptionKind::raw_material_delay,
    DisruptionKind::sfg_quarantine};
  std::vector<Day> durations = {1, 3, 5, 7, 9};

  /// Empty keeps the generator's own level.
  std::vector<double> days_on_hand;
  std::vector<std::uint64_t> seeds = {1};
  Day start_day = 0;
};

/// One grid cell for one seed, or the mean over seeds.
struct SweepRow
{
  DisruptionKind kind = DisruptionKind::line_stoppage;
  std::optional<double> days_on_hand;
  Day duration_days = 0;

  /// Empty for a fixed world and for mean rows.
  std::optional<std::uint64_t> seed;
  bool mean = false;

  double iterations = 0;
  double rescheduled_material_agents = 0;
  double rescheduled_capacity_agents = 0;
  double rescheduled_finished_goods = 0;
  double fg_fulfillment_by_orders = 1.0;
  double fg_fulfillment_by_volume = 1.0;
  double max_delay_days = 0;
  bool stabilized = true;

  /// Feasibility and degradation violations found in the final world.
  std::size_t invariant_violations = 0;
  std::string error;
};

struct SweepTable
{
  std::vector<SweepRow> rows;
};

namespace detail {

inline SweepRow run_cell(
  const WorldState& world,
  DisruptionKind kind,
  Day start,
  Day duration,
  const EngineConfig& config)
{
  SweepRow row;
  row.kind = kind;
  row.duration_days = duration;
  try
  {
    const auto events = events_per_bom(world, kind, start, duration);
    const auto result = run_until_stable(world, events, config);
    const auto k = compute_kpis(world, result);
    row.iterations = k.iterations;
    row.rescheduled_material_agents = k.rescheduled_material_agents;
    row.rescheduled_capacity_agents = k.rescheduled_capacity_agents;
    row.rescheduled_finished_goods = k.rescheduled_finished_goods;
    row.fg_fulfillment_by_orders = k.fg_fulfillment_by_orders;
    row.fg_fulfillment_by_volume = k.fg_fulfillment_by_volume;
    row.max_delay_days = k.max_delay_days;
    row.stabilized = result.stabilized;
    row.invariant_violations = check_feasibility(result.world).size()
      + check_degradation(result.world).size();
  }
  catch (const std::exception& e)
  {
    row.stabilized = false;
    row.error = e.what();
  }
  return row;
}

inline SweepRow mean_of(const std::vector<SweepRow>& rows)
{
  SweepRow m = rows.front();
  m.seed.reset();
  m.mean = true;
  m.error.clear();
  m.iterations = m.rescheduled_material_agents = m.rescheduled_capacity_agents = 0;
  m.rescheduled_finished_goods = m.fg_fulfillment_by_orders = 0;
  m.fg_fulfillment_by_volume = m.max_delay_days = 0;
  m.invariant_violations = 0;
  m.stabilized = true;
  std::size_t ok = 0;
  for (const auto& r : rows)
  {
    m.stabilized = m.stabilized && r.stabilized;
    m.invariant_violations += r.invariant_violations;
    if (!r.error.empty())
    {
      if (m.error.empty())
        m.error = r.error;
      continue;
    }
    ++ok;
    m.iterations += r.iterations;
    m.rescheduled_material_agents += r.rescheduled_material_agents;
    m.rescheduled_capacity_agents += r.rescheduled_capacity_agents;
    m.rescheduled_finished_goods += r.rescheduled_finished_goods;
    m.fg_fulfillment_by_orders += r.fg_fulfillment_by_orders;
    m.fg_fulfillment_by_volume += r.fg_fulfillment_by_volume;
    m.max_delay_days += r.max_delay_days;
  }
  if (ok > 0)
  {
    const double n = static_cast<double>(ok);
    m.iterations /= n;
    m.rescheduled_material_agents /= n;
    m.rescheduled_capacity_agents /= n;
    m.rescheduled_finished_goods /= n;
    m.fg_fulfillment_by_orders /= n;
    m.fg_fulfillment_by_volume /= n;
    m.max_delay_days /= n;
  }
  return m;
}

/// Runs every (kind, days-on-hand, duration, seed) cell; rows come out in
/// grid order whatever `jobs` is.
inline SweepTable run_sweep(
  const std::function<WorldState(std::optional<double>, std::uint64_t)>& make_world,
  const SweepGrid& grid,
  const EngineConfig& config,
  unsigned jobs)
{
  if (grid.seeds.empty())
    throw InputError("--seeds", "need at least one seed");
  std::vector<std::optional<double>> levels;
  for (const double d : grid.days_on_hand)
    levels.emplace_back(d);
  if (levels.empty())
    levels.emplace_back(std::nullopt);

  std::vector<WorldState> worlds;
  for (const auto& doh : levels)
    for (const auto seed : grid.seeds)
      worlds.push_back(make_world(doh, seed));

  struct Cell
  {
    DisruptionKind kind;
    std::size_t level;
    Day duration;
    std::size_t seed;
  };
  std::vector<Cell> cells;
  for (const auto kind : grid.kinds)
    for (std::size_t l = 0; l < levels.size(); ++l)
      for (const auto duration : grid.durations)
        for (std::size_t s = 0; s < grid.seeds.size(); ++s)
          cells.push_back({kind, l, duration, s});

  std::vector<SweepRow> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]()
    {
      for (std::size_t i = next++; i < cells.size(); i = next++)
      {
        const auto& c = cells[i];
        results[i] = run_cell(worlds[c.level * grid.seeds.size() + c.seed],
                              c.kind, grid.start_day, c.duration, config);
        results[i].days_on_hand = levels[c.level];
        results[i].seed = grid.seeds[c.seed];
      }
    };
  const unsigned threads = std::max(1u, std::min<unsigned>(
    jobs, static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool)
    t.join();

  SweepTable table;
  for (std::size_t i = 0; i < results.size(); i += grid.seeds.size())
  {
    std::vector<SweepRow> group(results.begin() + static_cast<std::ptrdiff_t>(i),
      results.begin() + static_cast<std::ptrdiff_t>(i + grid.seeds.size()));
    for (const auto& r : group)
      table.rows.push_back(r);
    if (group.size() > 1)
      table.rows.push_back(mean_of(group));
  }
  return table;
}

} // namespace detail

/// Sweep over generated scenarios; each days-on-hand level and seed gets
/// its own scenario built from `params`.
inline SweepTable sweep(
  const GeneratorParams& params,
  const SweepGrid& grid,
  const EngineConfig& config = {},
  unsigned jobs = 1)
{
  return detail::run_sweep(
    [&](std::optional<double> doh, std::uint64_t seed)
    {
      GeneratorParams p = params;
      p.seed = seed;
      if (doh)
        p.days_on_hand = *doh;
      return load_scenario(generate_scenario(p)).world;
    }, grid, config, jobs);
}

/// Sweep over one fixed world; days-on-hand and seeds do not apply.
inline SweepTable sweep(
  const WorldState& world,
  SweepGrid grid,
  const EngineConfig& config = {},
  unsigned jobs = 1)
{
  grid.days_on_hand.clear();
  grid.seeds = {0};
  auto table = detail::run_sweep(
    [&](std::optional<double>, std::uint64_t) { return world; }, grid, config, jobs);
  for (auto& r : table.rows)
    r.seed.reset();
  return table;
}

//==============================================================================
inline const std::vector<std::string>& sweep_columns()
{
  static const std::vector<std::string> columns = {
    "disruption_type", "days_on_hand", "duration_days", "seed", "iterations",
    "rescheduled_material_agents", "rescheduled_capacity_agents", "rescheduled_fgs",
    "fg_fulfillment_by_orders", "fg_fulfillment_by_volume", "max_delay_days",
    "stabilized", "invariant_violations", "error"};
  return columns;
}

namespace detail {

inline std::string fixed(double v, int digits)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

inline std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (const char c : s)
  {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

} // namespace detail

/// Counts print as integers except on mean rows, which get two decimals.
inline std::string to_csv(const SweepTable& t)
{
  std::ostringstream out;
  const auto& cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& r : t.rows)
  {
    const int digits = r.mean ? 2 : 0;
    out << to_string(r.kind) << ','
        << (r.days_on_hand ? detail::fixed(*r.days_on_hand, 1) : "") << ','
        << r.duration_days << ','
        << (r.mean ? "mean" : r.seed ? std::to_string(*r.seed) : "") << ','
        << detail::fixed(r.iterations, digits) << ','
        << detail::fixed(r.rescheduled_material_agents, digits) << ','
        << detail::fixed(r.rescheduled_capacity_agents, digits) << ','
        << detail::fixed(r.rescheduled_finished_goods, digits) << ','
        << detail::fixed(r.fg_fulfillment_by_orders, 6) << ','
        << detail::fixed(r.fg_fulfillment_by_volume, 6) << ','
        << detail::fixed(r.max_delay_days, digits) << ','
        << (r.stabilized ? "true" : "false") << ','
        << r.invariant_violations << ','
        << detail::csv_field(r.error) << "\n";
  }
  return out.str();
}

inline json to_json(const SweepRow& r)
{
  return {
    {"disruption_type", to_string(r.kind)},
    {"days_on_hand", r.days_on_hand ? json(*r.days_on_hand) : json(nullptr)},
    {"duration_days", r.duration_days},
    {"seed", r.mean ? json("mean") : r.seed ? json(*r.seed) : json(nullptr)},
    {"iterations", r.iterations},
    {"rescheduled_material_agents", r.rescheduled_material_agents},
    {"rescheduled_capacity_agents", r.rescheduled_capacity_agents},
    {"rescheduled_fgs", r.rescheduled_finished_goods},
    {"fg_fulfillment_by_orders", r.fg_fulfillment_by_orders},
    {"fg_fulfillment_by_volume", r.fg_fulfillment_by_volume},
    {"max_delay_days", r.max_delay_days},
    {"stabilized", r.stabilized},
    {"invariant_violations", r.invariant_violations},
    {"error", r.error}};
}

inline json to_json(const SweepTable& t)
{
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back(to_json(r));
  return {{"columns", sweep_columns()}, {"rows", rows}};
}

} // namespace resched

#endif // RESCHED__METRICS_HPP
