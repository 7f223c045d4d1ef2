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

#include <resched/http.hpp>
#include <resched/metrics.hpp>
#include <resched/problem_io.hpp>
#include <resched/scenario.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace resched;

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_unstable = 2;

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError(path, "cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw InputError(path.string(), "cannot write file");
  out << content;
}

std::vector<std::string> split_list(const std::string& s)
{
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s)
  {
    if (c == ',')
    {
      if (!cur.empty())
        out.push_back(cur);
      cur.clear();
    }
    else
    {
      cur += c;
    }
  }
  if (!cur.empty())
    out.push_back(cur);
  return out;
}

template<typename T>
std::vector<T> parse_list(const std::string& s, const std::string& flag)
{
  std::vector<T> out;
  for (const auto& item : split_list(s))
  {
    std::istringstream in(item);
    T v{};
    in >> v;
    if (in.fail() || !in.eof())
      throw InputError(flag, "bad list item '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void add_generator_flags(CLI::App* cmd, GeneratorParams& p)
{
  cmd->add_option("--boms", p.boms, "Number of independent product groups")->capture_default_str();
  cmd->add_option("--depth-min", p.depth_min, "Shallowest BOM depth in levels")->capture_default_str();
  cmd->add_option("--depth-max", p.depth_max, "Deepest BOM depth in levels")->capture_default_str();
  cmd->add_option("--materials", p.materials, "Total material agents")->capture_default_str();
  cmd->add_option("--capacities", p.capacities, "Total capacity packages")->capture_default_str();
  cmd->add_option("--doh", p.days_on_hand, "Inventory days-on-hand")->capture_default_str();
  cmd->add_option("--order-density", p.order_density,
                  "Finished-good orders per day and finished good")->capture_default_str();
  cmd->add_option("--orders-per-fg", p.orders_per_fg,
                  "Exact orders per finished good (overrides density when > 0)")->capture_default_str();
  cmd->add_option("--horizon", p.horizon, "Planning horizon in days")->capture_default_str();
  cmd->add_option("--headroom", p.capacity_headroom,
                  "Line capacity above the average load, as a fraction")->capture_default_str();
  cmd->add_option("--max-per-unit", p.max_per_unit,
                  "Largest BOM consumption coefficient")->capture_default_str();
  cmd->add_option("--seed", p.seed, "Random seed")->capture_default_str();
}

void print_kpis(const KpiReport& k, std::ostream& out)
{
  out << "iterations                   " << k.iterations << "\n"
      << "rescheduled material agents  " << k.rescheduled_material_agents << "\n"
      << "rescheduled capacity agents  " << k.rescheduled_capacity_agents << "\n"
      << "rescheduled finished goods   " << k.rescheduled_finished_goods << "\n"
      << "FG fulfillment by orders     " << k.fg_fulfillment_by_orders << "\n"
      << "FG fulfillment by volume     " << k.fg_fulfillment_by_volume << "\n"
      << "max delay of FG orders       " << k.max_delay_days << "\n";
}

//==============================================================================
struct GenArgs
{
  GeneratorParams params;
  std::string out;
  bool json = false;
};

int cmd_gen(const GenArgs& a)
{
  const auto scenario = generate_scenario(a.params);
  const auto bytes = dump_canonical(to_json(scenario));
  if (a.out.empty())
  {
    std::cout << bytes << "\n";
    return exit_ok;
  }
  write_file(a.out, bytes + "\n");
  const auto world = load_scenario(scenario).world;
  if (a.json)
  {
    std::cout << json{{"out", a.out},
                      {"materials", world.bom.nodes.size()},
                      {"capacity_packages", world.packages.size()},
                      {"orders", world.orders.size()},
                      {"days_on_hand", days_on_hand(world)}}.dump() << "\n";
  }
  else
  {
    std::cout << "wrote " << a.out << ": " << world.bom.nodes.size() << " materials, "
              << world.packages.size() << " capacity packages, "
              << world.orders.size() << " orders, days-on-hand "
              << days_on_hand(world) << "\n";
  }
  return exit_ok;
}

//==============================================================================
struct RunArgs
{
  std::string scenario;
  std::vector<std::string> events;
  std::string mode;
  int max_iterations = 0;
  bool inventory_reduction = false;
  std::string out;
  bool json = false;
};

int cmd_run(const RunArgs& a)
{
  auto loaded = load_scenario(read_file(a.scenario));
  for (const auto& spec : a.events)
  {
    const auto e = parse_event_spec(spec);
    validate(loaded.world, e);
    loaded.events.push_back(e);
  }
  if (!a.mode.empty())
    loaded.config.fulfillment_mode = fulfillment_mode_from_string(a.mode);
  if (a.max_iterations > 0)
    loaded.config.max_iterations = a.max_iterations;
  if (a.inventory_reduction)
    loaded.config.inventory_reduction_enabled = true;

  const auto result = run_until_stable(loaded.world, loaded.events, loaded.config);
  const auto kpis = compute_kpis(loaded.world, result);

  if (!a.out.empty())
  {
    const std::filesystem::path dir(a.out);
    std::filesystem::create_directories(dir);
    write_file(dir / "trace.jsonl", io::trace_jsonl(result.trace));
    write_file(dir / "kpis.json", to_json(kpis).dump() + "\n");
    write_file(dir / "world.json",
               save_scenario(result.world, loaded.events, loaded.config) + "\n");
  }

  if (a.json)
  {
    std::cout << json{{"stabilized", result.stabilized},
                      {"iterations", result.iterations_used},
                      {"kpis", to_json(kpis)},
                      {"triggered", result.triggered},
                      {"affected_materials", result.affected_materials},
                      {"affected_capacities", result.affected_capacities}}.dump() << "\n";
  }
  else
  {
    std::cout << (result.stabilized ? "stabilized" : "did not stabilize") << " after "
              << result.iterations_used << " round(s)\n";
    print_kpis(kpis, std::cout);
  }
  if (!result.stabilized)
  {
    std::cerr << "negotiation hit the iteration bound of " << loaded.config.max_iterations
              << " rounds\n";
    return exit_unstable;
  }
  return exit_ok;
}

//==============================================================================
struct SweepArgs
{
  GeneratorParams params;
  std::string scenario;
  std::string kinds = "all";
  std::string durations = "1,3,5,7,9";
  std::string doh;
  std::string seeds = "1";
  Day start_day = 0;
  unsigned jobs = 1;
  std::string mode;
  std::string format = "csv";
  std::string out;
  bool json = false;
};

int cmd_sweep(const SweepArgs& a)
{
  SweepGrid grid;
  grid.kinds.clear();
  if (a.kinds == "all")
  {
    grid.kinds = {DisruptionKind::line_stoppage, DisruptionKind::raw_material_delay,
                  DisruptionKind::sfg_quarantine};
  }
  else
  {
    for (const auto& k : split_list(a.kinds))
    {
      try
      {
        grid.kinds.push_back(disruption_kind_from_string(k));
      }
      catch (const InputError& e)
      {
        throw InputError("--kinds", e.what());
      }
    }
  }
  grid.durations = parse_list<Day>(a.durations, "--durations");
  grid.days_on_hand = parse_list<double>(a.doh, "--doh-levels");
  grid.seeds = parse_list<std::uint64_t>(a.seeds, "--seeds");
  grid.start_day = a.start_day;
  for (const auto d : grid.durations)
    if (d < 1)
      throw InputError("--durations", "durations must be at least 1 day");

  EngineConfig config;
  SweepTable table;
  if (!a.scenario.empty())
  {
    const auto loaded = load_scenario(read_file(a.scenario));
    config = loaded.config;
    if (!a.mode.empty())
      config.fulfillment_mode = fulfillment_mode_from_string(a.mode);
    table = sweep(loaded.world, grid, config, a.jobs);
  }
  else
  {
    config.horizon_days = a.params.horizon;
    if (!a.mode.empty())
      config.fulfillment_mode = fulfillment_mode_from_string(a.mode);
    table = sweep(a.params, grid, config, a.jobs);
  }

  const bool as_json = a.json || a.format == "json";
  const std::string bytes = as_json ? to_json(table).dump() + "\n" : to_csv(table);
  if (a.out.empty())
    std::cout << bytes;
  else
    write_file(a.out, bytes);

  bool stable = true;
  for (const auto& r : table.rows)
    stable = stable && r.stabilized;
  return stable ? exit_ok : exit_unstable;
}

//==============================================================================
struct SolveArgs
{
  std::string problem;
  std::string mode;
  bool oracle = false;
};

int cmd_solve(const SolveArgs& a)
{
  std::string bytes;
  if (a.problem.empty() || a.problem == "-")
  {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    bytes = ss.str();
  }
  else
  {
    bytes = read_file(a.problem);
  }
  json j;
  try
  {
    j = json::parse(bytes);
  }
  catch (const json::parse_error& e)
  {
    throw InputError("", std::string("invalid JSON: ") + e.what());
  }
  std::cout << solve_to_json(solver_input_from_json(j, a.mode), a.oracle).dump() << "\n";
  return exit_ok;
}

//==============================================================================
struct ServeArgs
{
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string token;
  std::string static_dir;
  bool json = false;
};

int cmd_serve(const ServeArgs& a)
{
  ApiService api;
  httplib::Server server;
  mount_api(server, api, {a.token, a.static_dir});
  if (a.json)
    std::cout << json{{"host", a.host}, {"port", a.port}}.dump() << std::endl;
  else
    std::cout << "listening on http://" << a.host << ":" << a.port << std::endl;
  if (!server.listen(a.host, a.port))
    throw InputError("--port", "cannot listen on " + a.host + ":" + std::to_string(a.port));
  return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Multi-agent production rescheduling under supply chain disruptions"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic scenario");
  add_generator_flags(gen_cmd, gen.params);
  gen_cmd->add_option("--out", gen.out, "Output file (stdout when omitted)");
  gen_cmd->add_flag("--json", gen.json, "Print a JSON summary");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Negotiate a scenario until it stabilizes");
  run_cmd->add_option("--scenario", run.scenario, "Scenario JSON file")->required();
  run_cmd->add_option("--event", run.events,
                      "Extra event kind:target:start:duration[:quantity]; repeatable");
  run_cmd->add_option("--mode", run.mode, "Fulfillment mode: partial or all_or_nothing");
  run_cmd->add_option("--max-iterations", run.max_iterations, "Round limit");
  run_cmd->add_flag("--inventory-reduction", run.inventory_reduction,
                    "Strip excess production after stabilization");
  run_cmd->add_option("--out", run.out, "Directory for trace.jsonl, kpis.json, world.json");
  run_cmd->add_flag("--json", run.json, "Print a JSON summary");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a disruption grid and report KPIs");
  add_generator_flags(sweep_cmd, sw.params);
  sweep_cmd->add_option("--scenario", sw.scenario,
                        "Fixed scenario instead of generated ones (ignores --doh-levels, --seeds)");
  sweep_cmd->add_option("--kinds", sw.kinds,
                        "all, or a comma list of line_stoppage, raw_material_delay, sfg_quarantine")
    ->capture_default_str();
  sweep_cmd->add_option("--durations", sw.durations, "Comma list of durations in days")
    ->capture_default_str();
  sweep_cmd->add_option("--doh-levels", sw.doh, "Comma list of days-on-hand levels");
  sweep_cmd->add_option("--seeds", sw.seeds, "Comma list of generator seeds")->capture_default_str();
  sweep_cmd->add_option("--start-day", sw.start_day, "First disrupted day")->capture_default_str();
  sweep_cmd->add_option("--jobs", sw.jobs, "Worker threads")->capture_default_str();
  sweep_cmd->add_option("--mode", sw.mode, "Fulfillment mode: partial or all_or_nothing");
  sweep_cmd->add_option("--format", sw.format, "csv or json")
    ->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sweep_cmd->add_option("--out", sw.out, "Report file (stdout when omitted)");
  sweep_cmd->add_flag("--json", sw.json, "Same as --format json");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one optimization problem from JSON");
  solve_cmd->add_option("--problem", solve.problem, "Problem file (stdin when omitted or -)");
  solve_cmd->add_option("--mode", solve.mode,
                        "partial, all_or_nothing, capacity or consolidation (overrides the file)");
  solve_cmd->add_flag("--oracle", solve.oracle, "Enumerate every solution instead");
  solve_cmd->add_flag("--json", "Output is always JSON; accepted for symmetry");

  ServeArgs serve;
  if (const char* env = std::getenv("RESCHED_PORT"))
    serve.port = std::atoi(env);
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  serve_cmd->add_option("--host", serve.host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Port (default from RESCHED_PORT, else 8080)")
    ->capture_default_str();
  serve_cmd->add_option("--token", serve.token, "Require this bearer token");
  serve_cmd->add_option("--static", serve.static_dir, "Directory of the console bundle");
  serve_cmd->add_flag("--json", serve.json, "Print the listening address as JSON");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_input;
  }

  try
  {
    if (*gen_cmd)
      return cmd_gen(gen);
    if (*run_cmd)
      return cmd_run(run);
    if (*sweep_cmd)
      return cmd_sweep(sw);
    if (*solve_cmd)
      return cmd_solve(solve);
    if (*serve_cmd)
      return cmd_serve(serve);
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}
