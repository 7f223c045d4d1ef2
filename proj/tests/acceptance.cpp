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

// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.

#include "fixtures.hpp"
#include "random_instances.hpp"

#include <resched/metrics.hpp>
#include <resched/oracle.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

using namespace resched;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail)
{
  std::cout << (ok ? "PASS" : "FAIL") << "  [" << id << "] " << name << ": " << detail
            << std::endl;
  if (!ok)
    ++failures;
}

/// Runs `check`, turning an escaped exception into a failure line.
void criterion(int id, const std::string& name, const std::function<std::pair<bool, std::string>()>& check)
{
  try
  {
    const auto [ok, detail] = check();
    report(id, name, ok, detail);
  }
  catch (const std::exception& e)
  {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(double v, int digits = 2)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

//==============================================================================
std::pair<bool, std::string> solver_oracle_equivalence()
{
  constexpr int Instances = 250;
  const auto t0 = Clock::now();
  int mismatches = 0;
  resched::test::InstanceSource src(20260101);
  for (const auto mode : {AllocationMode::partial, AllocationMode::all_or_nothing, AllocationMode::capacity})
    for (int i = 0; i < Instances; ++i)
    {
      const auto p = src.allocation(mode);
      const auto w = mode == AllocationMode::partial ? src.weights() : WeightConfig{};
      Allocation got;
      if (mode == AllocationMode::partial)
        got = solve_partial(p, w);
      else if (mode == AllocationMode::all_or_nothing)
        got = solve_all_or_nothing(p, w);
      else
        got = solve_capacity(p);
      if (got.objective != brute_force_oracle(p, w).objective
          || !resched::test::satisfies_constraints(p, got.x))
        ++mismatches;
    }
  for (int i = 0; i < Instances; ++i)
  {
    const auto p = src.reduction();
    const auto got = solve_consolidation(p);
    if (got.objective != brute_force_oracle(p).objective
        || !resched::test::dominates_every_request(p, got.r))
      ++mismatches;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 60.0,
          "4 solvers x " + std::to_string(Instances) + " instances, " + std::to_string(mismatches)
            + " mismatches, " + fmt(secs) + " s (limit 60 s)"};
}

//==============================================================================
std::size_t production_days(const WorldState& w, const AgentId& id)
{
  return w.supply.at(id).planned_production.size();
}

std::pair<bool, std::string> fig2_split()
{
  const auto t0 = Clock::now();
  const auto s = resched::test::fig2();
  const auto r = run_until_stable(s.world, {resched::test::rm1_delay()}, s.config);
  const double secs = seconds_since(t0);
  const auto violations = check_feasibility(r.world).size();
  const auto sfg1 = production_days(r.world, "SFG1");
  const auto fg1 = production_days(r.world, "FG1");
  const bool split = sfg1 > production_days(s.world, "SFG1") && fg1 > production_days(s.world, "FG1")
    && r.world.supply.at("SFG1").planned_production.count(8)
    && r.world.supply.at("SFG1").planned_production.count(10);
  const bool ok = r.stabilized && violations == 0 && split && secs < 5.0;
  return {ok, "stabilized=" + std::string(r.stabilized ? "yes" : "no") + ", violations="
                + std::to_string(violations) + ", SFG1 on " + std::to_string(sfg1) + " days, FG1 on "
                + std::to_string(fg1) + " days (baseline 2 each), " + fmt(secs, 3) + " s (limit 5 s)"};
}

//==============================================================================
std::pair<bool, std::string> quiescence()
{
  const auto s = resched::test::fig2();
  const auto r = run_until_stable(s.world, {}, s.config);
  const auto k = compute_kpis(s.world, r);
  const bool same = r.world.orders == s.world.orders && r.world.supply == s.world.supply
    && r.world.packages == s.world.packages;
  const bool identity = k.fg_fulfillment_by_orders == 1.0 && k.fg_fulfillment_by_volume == 1.0
    && k.max_delay_days == 0 && k.rescheduled_material_agents == 0
    && k.rescheduled_capacity_agents == 0 && k.rescheduled_finished_goods == 0;

  // Same on a generated world.
  const auto g = load_scenario(generate_scenario({})).world;
  const auto rg = run_until_stable(g, {}, {});
  const bool same_g = rg.iterations_used == 0 && rg.world.orders == g.orders && rg.world.supply == g.supply;

  return {r.iterations_used == 0 && same && identity && same_g,
          "iterations=" + std::to_string(r.iterations_used) + ", world " + (same ? "unchanged" : "CHANGED")
            + ", KPI row " + (identity ? "identity" : "NOT identity") + ", generated world "
            + (same_g ? "unchanged" : "CHANGED")};
}

//==============================================================================
std::pair<bool, std::string> convergence()
{
  const auto t0 = Clock::now();
  GeneratorParams p;
  const auto w = load_scenario(generate_scenario(p)).world;
  const bool shape = w.bom.nodes.size() == 39 && w.packages.size() == 18 && bom_components(w).size() == 5;
  const auto table = sweep(p, SweepGrid{});
  const double secs = seconds_since(t0);

  double worst = 0;
  bool all_stable = table.rows.size() == 15;
  for (const auto& r : table.rows)
  {
    all_stable = all_stable && r.stabilized && r.error.empty();
    worst = std::max(worst, r.iterations);
  }
  const bool ok = shape && all_stable && worst <= 15 && secs < 300;
  return {ok, std::to_string(table.rows.size()) + " cells on 39 materials / 18 capacities / 5 BOMs, all "
                + (all_stable ? "stabilized" : "NOT stabilized") + " within 50 rounds, max iterations "
                + fmt(worst, 0) + " (limit 15), " + fmt(secs) + " s (limit 300 s)"};
}

//==============================================================================
/// Cumulative commitments of every order never exceed the baseline's,
/// checked here from the raw schedules.
std::size_t degradations(const WorldState& baseline, const WorldState& w)
{
  std::size_t bad = 0;
  for (const auto& [id, o] : w.orders)
  {
    const auto& base = baseline.orders.at(id).committed;
    Quantity now = 0;
    Quantity then = 0;
    for (Day n = 0; n < w.horizon; ++n)
    {
      if (const auto it = o.committed.find(n); it != o.committed.end())
        now += it->second;
      if (const auto it = base.find(n); it != base.end())
        then += it->second;
      if (now > then)
      {
        ++bad;
        break;
      }
    }
  }
  return bad;
}

struct Cell
{
  double by_orders = 1;
  double by_volume = 1;
};

/// Results of the trend grid: kind -> doh -> seed -> duration.
struct TrendGrid
{
  std::map<DisruptionKind, std::map<double, std::map<std::uint64_t, std::map<Day, Cell>>>> cells;
  std::size_t runs = 0;
  std::size_t unstable = 0;
  std::size_t degraded = 0;
  std::size_t infeasible = 0;
};

const std::vector<DisruptionKind> all_kinds = {
  DisruptionKind::line_stoppage, DisruptionKind::raw_material_delay, DisruptionKind::sfg_quarantine};
const std::vector<double> doh_levels = {3.8, 6.7, 14.8};
const std::vector<std::uint64_t> trend_seeds = {1, 2, 3};
const std::vector<Day> durations = {1, 3, 5, 7, 9};

TrendGrid run_trend_grid()
{
  TrendGrid g;
  for (const double doh : doh_levels)
    for (const auto seed : trend_seeds)
    {
      GeneratorParams p;
      p.days_on_hand = doh;
      p.seed = seed;
      const auto w = load_scenario(generate_scenario(p)).world;
      for (const auto kind : all_kinds)
        for (const auto d : durations)
        {
          const auto r = run_until_stable(w, events_per_bom(w, kind, 0, d), {});
          const auto k = compute_kpis(w, r);
          ++g.runs;
          g.unstable += !r.stabilized;
          g.degraded += degradations(w, r.world);
          g.infeasible += check_feasibility(r.world).size();
          g.cells[kind][doh][seed][d] = {k.fg_fulfillment_by_orders, k.fg_fulfillment_by_volume};
        }
    }
  return g;
}

std::pair<bool, std::string> trends(const TrendGrid& g)
{
  constexpr double eps = 1e-12;
  int duration_breaks = 0;
  std::string first_break;
  for (const auto& [kind, by_doh] : g.cells)
    for (const auto& [doh, by_seed] : by_doh)
      for (const auto& [seed, by_d] : by_seed)
      {
        const Cell* prev = nullptr;
        for (const auto& [d, c] : by_d)
        {
          if (prev && (c.by_orders > prev->by_orders + eps || c.by_volume > prev->by_volume + eps))
          {
            ++duration_breaks;
            if (first_break.empty())
              first_break = std::string(to_string(kind)) + " doh " + fmt(doh, 1) + " seed "
                + std::to_string(seed) + " day " + std::to_string(d);
          }
          prev = &c;
        }
      }

  int doh_breaks = 0;
  for (const auto kind : {DisruptionKind::line_stoppage, DisruptionKind::sfg_quarantine})
    for (const auto seed : trend_seeds)
      for (const auto d : durations)
      {
        const auto& lo = g.cells.at(kind).at(3.8).at(seed).at(d);
        const auto& hi = g.cells.at(kind).at(14.8).at(seed).at(d);
        if (lo.by_orders > hi.by_orders + eps || lo.by_volume > hi.by_volume + eps)
        {
          ++doh_breaks;
          if (first_break.empty())
            first_break = std::string(to_string(kind)) + " seed " + std::to_string(seed)
              + " duration " + std::to_string(d) + " better at 3.8 than 14.8";
        }
      }

  // The trend must be visible, not just flat.
  double worst = 1.0;
  for (const auto kind : {DisruptionKind::line_stoppage, DisruptionKind::sfg_quarantine})
    for (const auto seed : trend_seeds)
      worst = std::min(worst, g.cells.at(kind).at(3.8).at(seed).at(9).by_orders);

  const bool ok = duration_breaks == 0 && doh_breaks == 0 && worst < 1.0;
  std::string detail = std::to_string(g.runs) + " runs over seeds {1,2,3} x doh {3.8,6.7,14.8}; "
    + std::to_string(duration_breaks) + " duration-trend breaks, " + std::to_string(doh_breaks)
    + " days-on-hand breaks (stoppage, quarantine); lowest by-orders at 3.8 days, 9-day disruption "
    + fmt(worst, 3);
  if (!first_break.empty())
    detail += "; first break: " + first_break;
  return {ok, detail};
}

std::pair<bool, std::string> degradation(const TrendGrid& g)
{
  const bool ok = g.degraded == 0 && g.infeasible == 0 && g.unstable == 0;
  return {ok, std::to_string(g.runs) + " runs, " + std::to_string(g.degraded)
                + " orders committing above baseline, " + std::to_string(g.infeasible)
                + " feasibility violations, " + std::to_string(g.unstable) + " unstable"};
}

//==============================================================================
int run_cli(const std::string& args, std::string* out = nullptr)
{
  const std::string cmd = std::string("\"") + RESCHED_CLI + "\" " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p)
    return -1;
  std::string buf(4096, '\0');
  std::size_t n = 0;
  std::string text;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0)
    text.append(buf.data(), n);
  const int status = pclose(p);
  if (out)
    *out = std::move(text);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::pair<bool, std::string> determinism()
{
  const auto dir = fs::temp_directory_path() / "resched-acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };
  std::vector<std::string> broken;

  std::string a, b;
  const int g1 = run_cli("gen --seed 5 --doh 3.8", &a);
  const int g2 = run_cli("gen --seed 5 --doh 3.8", &b);
  if (g1 != 0 || g2 != 0 || a != b || a.empty())
    broken.push_back("gen");

  const auto scenario = dir / "scenario.json";
  run_cli("gen --seed 5 --doh 3.8 --out " + q(scenario));
  const auto w = load_scenario(std::string_view(resched::test::read_file(scenario.string()))).world;
  std::string event_args;
  for (const auto& e : events_per_bom(w, DisruptionKind::line_stoppage, 0, 7))
    event_args += " --event stoppage:" + e.target + ":0:7";
  for (const auto* run : {"r1", "r2"})
    run_cli("run --scenario " + q(scenario) + event_args + " --out " + q(dir / run));
  for (const auto* f : {"trace.jsonl", "kpis.json", "world.json"})
  {
    const auto x = resched::test::read_file((dir / "r1" / f).string());
    const auto y = resched::test::read_file((dir / "r2" / f).string());
    if (x != y || x.empty())
      broken.push_back(std::string("run ") + f);
  }

  const std::string grid = "sweep --doh-levels 3.8,14.8 --seeds 1,2";
  std::string s1, s2, s4;
  run_cli(grid + " --jobs 1", &s1);
  run_cli(grid + " --jobs 1", &s2);
  run_cli(grid + " --jobs 4", &s4);
  if (s1 != s2 || s1 != s4 || s1.empty())
    broken.push_back("sweep");
  std::string j1, j4;
  run_cli(grid + " --jobs 1 --format json", &j1);
  run_cli(grid + " --jobs 4 --format json", &j4);
  if (j1 != j4 || j1.empty())
    broken.push_back("sweep json");

  fs::remove_all(dir);
  std::string detail = "gen, run (trace/kpis/world) and sweep (csv, json; --jobs 1 vs 4) outputs ";
  if (broken.empty())
    return {true, detail + "byte-identical"};
  std::string list;
  for (const auto& s : broken)
    list += (list.empty() ? "" : ", ") + s;
  return {false, detail + "differ: " + list};
}

//==============================================================================
std::string schedule_bytes(const WorldState& w, const std::set<AgentId>& agents)
{
  json j = json::object();
  for (const auto& id : agents)
  {
    json orders = json::object();
    for (const auto* o : w.outgoing(id))
      orders[o->id] = io::day_map(o->committed);
    j[id] = {{"production", io::day_map(w.supply.at(id).planned_production)}, {"orders", orders}};
  }
  for (const auto& [id, p] : w.packages)
    if (agents.count(p.members.front()))
      j[id] = to_series(to_day_map(capacity_load(w, p)), w.horizon);
  return j.dump();
}

std::pair<bool, std::string> locality()
{
  const auto w = load_scenario(generate_scenario({})).world;
  const auto boms = bom_components(w);

  // Packages must not span product groups for the claim to apply.
  bool separate = true;
  for (const auto& [id, p] : w.packages)
    for (const auto& [fg, members] : boms)
      if (members.count(p.members.front()))
        for (const auto& m : p.members)
          separate = separate && members.count(m);

  int runs = 0;
  int leaks = 0;
  int moved = 0;
  for (const auto kind : all_kinds)
    for (const auto& e : events_per_bom(w, kind, 0, 9))
    {
      const AgentId member = kind == DisruptionKind::line_stoppage ? w.packages.at(e.target).members.front() : e.target;
      const auto r = run_until_stable(w, {e}, {});
      ++runs;
      moved += !r.affected_materials.empty();
      for (const auto& [fg, members] : boms)
      {
        if (members.count(member))
          continue;
        if (schedule_bytes(r.world, members) != schedule_bytes(w, members))
          ++leaks;
      }
    }
  return {separate && leaks == 0 && moved > 0,
          std::to_string(runs) + " single-BOM disruptions (3 kinds x 5 BOMs, 9 days), "
            + std::to_string(moved) + " rescheduled their own BOM, " + std::to_string(leaks)
            + " changes leaked into the other 4 BOMs"
            + (separate ? "" : "; capacity packages span BOMs")};
}

} // namespace

int main()
{
  criterion(1, "solver-oracle equivalence", solver_oracle_equivalence);
  criterion(2, "fig2 split production", fig2_split);
  criterion(3, "quiescence and identity", quiescence);
  criterion(4, "convergence bound", convergence);

  TrendGrid grid;
  bool grid_ok = true;
  std::string grid_error;
  try
  {
    grid = run_trend_grid();
  }
  catch (const std::exception& e)
  {
    grid_ok = false;
    grid_error = e.what();
  }
  criterion(5, "fulfillment trends", [&]
    { return grid_ok ? trends(grid) : std::make_pair(false, "exception: " + grid_error); });
  criterion(6, "monotone degradation", [&]
    { return grid_ok ? degradation(grid) : std::make_pair(false, "exception: " + grid_error); });

  criterion(7, "determinism", determinism);
  criterion(8, "affected-set locality", locality);

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
