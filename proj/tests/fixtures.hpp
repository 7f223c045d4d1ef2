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

#ifndef RESCHED__TESTS__FIXTURES_HPP
#define RESCHED__TESTS__FIXTURES_HPP

#include <resched/scenario.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace resched::test {

inline std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string data_path(const std::string& name)
{
  return std::string(RESCHED_DATA_DIR) + "/" + name;
}

/// Two finished goods sharing one line, with a second raw delivery to SFG1
/// on day 7 that a delay can push back.
inline ScenarioFile fig2_file()
{
  return parse_scenario(json::parse(read_file(data_path("fig2.json"))));
}

inline LoadedScenario fig2()
{
  return load_scenario(fig2_file());
}

inline DisruptionEvent rm1_delay()
{
  return {DisruptionKind::raw_material_delay, "RM1", 7, 3, std::nullopt};
}

/// RM -> SFG -> FG, one unit per unit at every stage, with one external
/// order of `qty` due on `day`. Everything happens on `day` itself, so
/// without `buffer` units of stock at every stage any delay propagates.
struct Chain
{
  std::vector<MaterialNode> nodes;
  std::vector<CapacityPackage> packages;
  std::vector<Order> orders;
  std::map<AgentId, SupplyProfile> supply;

  /// Puts FG on its own line with the given capacity.
  Chain& fg_line(DayMap capacity)
  {
    CapacityPackage p;
    p.id = nodes[2].id + "-LINE";
    p.members = {nodes[2].id};
    p.profile.per_day = std::move(capacity);
    packages.push_back(std::move(p));
    return *this;
  }

  Chain& merge(const Chain& other)
  {
    nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
    packages.insert(packages.end(), other.packages.begin(), other.packages.end());
    orders.insert(orders.end(), other.orders.begin(), other.orders.end());
    supply.insert(other.supply.begin(), other.supply.end());
    return *this;
  }

  WorldState build(Day horizon = 10) const
  {
    return build_world(nodes, packages, orders, supply, horizon);
  }
};

inline Chain chain_parts(Quantity qty, Day day, Quantity buffer, const std::string& prefix = "")
{
  const AgentId rm = prefix + "RM";
  const AgentId sfg = prefix + "SFG";
  const AgentId fg = prefix + "FG";
  Chain c;
  c.nodes.resize(3);
  c.nodes[0].id = rm;
  c.nodes[1].id = sfg;
  c.nodes[1].suppliers = {{rm, 1}};
  c.nodes[2].id = fg;
  c.nodes[2].suppliers = {{sfg, 1}};
  c.nodes[2].finished_good = true;

  c.orders = {
    {fg + "-O1", fg, external_customer, fg, {{day, qty}}, {{day, qty}}, 1, OrderStatus::active},
    {sfg + ">" + fg, sfg, fg, sfg, {{day, qty}}, {{day, qty}}, 1, OrderStatus::active},
    {rm + ">" + sfg, rm, sfg, rm, {{day, qty}}, {{day, qty}}, 1, OrderStatus::active},
  };
  c.supply[rm].in_stock = buffer;
  c.supply[rm].in_transit = {{day, qty}};
  c.supply[sfg].in_stock = buffer;
  c.supply[sfg].planned_production = {{day, qty}};
  c.supply[fg].in_stock = buffer;
  c.supply[fg].planned_production = {{day, qty}};
  return c;
}

inline WorldState chain(Quantity qty, Day day, Quantity buffer, Day horizon = 10)
{
  return chain_parts(qty, day, buffer).build(horizon);
}

} // namespace resched::test

#endif // RESCHED__TESTS__FIXTURES_HPP
