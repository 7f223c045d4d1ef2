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

#include "fixtures.hpp"

#include <resched/domain.hpp>

#include <gtest/gtest.h>

using namespace resched;
using resched::test::fig2;

namespace {

MaterialNode node(const AgentId& id, std::vector<SupplierLink> suppliers = {})
{
  MaterialNode n;
  n.id = id;
  n.suppliers = std::move(suppliers);
  return n;
}

Order order(const OrderId& id, const AgentId& supplier, const AgentId& customer, DayMap demand)
{
  Order o;
  o.id = id;
  o.supplier = supplier;
  o.customer = customer;
  o.demand = demand;
  o.committed = demand;
  return o;
}

} // namespace

//==============================================================================
TEST(BuildWorld, Fig2Structure)
{
  const auto w = fig2().world;
  EXPECT_EQ(w.bom.nodes.size(), 7u);
  EXPECT_EQ(w.packages.size(), 2u);
  std::size_t linked = 0;
  for (const auto& [id, n] : w.bom.nodes)
    linked += n.capacity_package.has_value();
  EXPECT_EQ(linked, 4u);

  EXPECT_EQ(w.material("FG1").level, 0);
  EXPECT_EQ(w.material("SFG1").level, 1);
  EXPECT_EQ(w.material("RM1").level, 2);
  EXPECT_EQ(w.material("RM2").level, 1);
  EXPECT_EQ(w.material("SFG1").customers, std::vector<AgentId>{"FG1"});
  EXPECT_TRUE(check_feasibility(w).empty());
  ASSERT_TRUE(w.baseline);
  EXPECT_EQ(w.baseline->orders, w.orders);
}

TEST(BuildWorld, EmptyOrderBookIsFeasible)
{
  const auto w = build_world({node("A"), node("B", {{"A", 1}})}, {}, {}, {}, 5);
  EXPECT_TRUE(check_feasibility(w).empty());
  EXPECT_EQ(w.supply.size(), 2u);
}

TEST(BuildWorld, RejectsCycles)
{
  EXPECT_THROW(build_world({node("A", {{"B", 1}}), node("B", {{"A", 1}})}, {}, {}, {}, 5),
               CycleError);
  EXPECT_THROW(build_world({node("A", {{"A", 1}})}, {}, {}, {}, 5), CycleError);
}

TEST(BuildWorld, DanglingReferencesCarryTheirLocation)
{
  try
  {
    build_world({node("A", {{"Z", 1}})}, {}, {}, {}, 5);
    FAIL() << "expected InputError";
  }
  catch (const InputError& e)
  {
    EXPECT_EQ(e.where(), "/materials/A/suppliers/0");
  }

  try
  {
    build_world({node("A")}, {}, {order("O", "A", "Q", {{1, 1}})}, {}, 5);
    FAIL() << "expected InputError";
  }
  catch (const InputError& e)
  {
    EXPECT_EQ(e.where(), "/orders/0/customer");
  }
}

TEST(BuildWorld, RejectsOutOfHorizonDays)
{
  EXPECT_THROW(build_world({node("A")}, {}, {order("O", "A", external_customer, {{5, 1}})},
                           {{"A", {5, {}, {}, {}}}}, 5),
               InputError);
}

TEST(BuildWorld, InfeasibleBaselineIsRejected)
{
  EXPECT_THROW(build_world({node("A")}, {}, {order("O", "A", external_customer, {{0, 10}})}, {}, 5),
               InfeasibleError);

  // Production without the inputs it consumes.
  std::map<AgentId, SupplyProfile> s;
  s["B"].planned_production = {{2, 4}};
  EXPECT_THROW(build_world({node("A"), node("B", {{"A", 2}})}, {}, {}, s, 5), InfeasibleError);
}

//==============================================================================
TEST(Availability, StockPlusArrivals)
{
  std::map<AgentId, SupplyProfile> s;
  s["A"].in_stock = 5;
  s["A"].in_transit = {{2, 3}};
  const auto w = build_world({node("A")}, {}, {}, s, 4);
  EXPECT_EQ(cumulative_available(w, "A", 0), 5);
  EXPECT_EQ(cumulative_available(w, "A", 1), 5);
  EXPECT_EQ(cumulative_available(w, "A", 2), 8);
  EXPECT_EQ(availability_curve(w, "A"), (Series{5, 5, 8, 8}));
}

TEST(Availability, NothingMeansZero)
{
  const auto w = build_world({node("A")}, {}, {}, {}, 3);
  EXPECT_EQ(availability_curve(w, "A"), (Series{0, 0, 0}));
}

TEST(Capacity, IsPerDayNotCumulative)
{
  CapacityPackage p;
  p.id = "L";
  p.members = {"A"};
  p.profile.per_day = {{0, 5}, {1, 5}};
  std::map<AgentId, SupplyProfile> s;
  s["A"].planned_production = {{1, 8}};
  EXPECT_THROW(build_world({node("A")}, {p}, {}, s, 2), InfeasibleError);

  s["A"].planned_production = {{0, 4}, {1, 4}};
  const auto w = build_world({node("A")}, {p}, {}, s, 2);
  EXPECT_EQ(capacity_load(w, w.packages.at("L")), (Series{4, 4}));
}

//==============================================================================
TEST(Disruption, RawDelayShiftsTheWindowToItsEnd)
{
  const auto w = fig2().world;
  const auto out = apply_disruption(w, resched::test::rm1_delay());
  EXPECT_EQ(out.affected, std::set<AgentId>{"RM1"});
  EXPECT_EQ(out.world.supply.at("RM1").in_transit, (DayMap{{2, 20}, {10, 20}}));
  EXPECT_EQ(cumulative_available(out.world, "RM1", 8), 25);
  EXPECT_EQ(cumulative_available(out.world, "RM1", 10), 45);
}

TEST(Disruption, PartialQuantityDelay)
{
  auto e = resched::test::rm1_delay();
  e.affected_quantity = 5;
  const auto out = apply_disruption(fig2().world, e);
  EXPECT_EQ(out.world.supply.at("RM1").in_transit, (DayMap{{2, 20}, {7, 15}, {10, 5}}));
}

TEST(Disruption, DelayWithoutArrivalsAffectsNothing)
{
  const auto w = fig2().world;
  const auto out = apply_disruption(w, {DisruptionKind::raw_material_delay, "RM1", 9, 2, std::nullopt});
  EXPECT_TRUE(out.affected.empty());
  EXPECT_EQ(out.world.supply, w.supply);
}

TEST(Disruption, QuarantineHoldsOutputUntilTheWindowEnds)
{
  const auto w = fig2().world;
  const auto out = apply_disruption(w, {DisruptionKind::sfg_quarantine, "SFG1", 3, 2, std::nullopt});
  EXPECT_EQ(out.affected, std::set<AgentId>{"SFG1"});
  EXPECT_EQ(cumulative_available(out.world, "SFG1", 3), 0);
  EXPECT_EQ(cumulative_available(out.world, "SFG1", 4), 0);
  EXPECT_EQ(cumulative_available(out.world, "SFG1", 5), 20);
  EXPECT_FALSE(check_feasibility(out.world).empty());
}

TEST(Disruption, StoppageRemovesCapacityForItsDuration)
{
  const auto w = fig2().world;
  const auto out = apply_disruption(w, {DisruptionKind::line_stoppage, "CAP-SFG", 2, 3, std::nullopt});
  EXPECT_EQ(out.affected, std::set<AgentId>{"CAP-SFG"});
  const auto& cap = out.world.packages.at("CAP-SFG").profile;
  EXPECT_EQ(cap.on(1), 30);
  EXPECT_EQ(cap.on(2), 0);
  EXPECT_EQ(cap.on(3), 0);
  EXPECT_EQ(cap.on(4), 0);
  EXPECT_EQ(cap.on(5), 30);
}

TEST(Disruption, ValidatesTargetsAndWindows)
{
  const auto w = fig2().world;
  EXPECT_THROW(apply_disruption(w, {DisruptionKind::line_stoppage, "FG1", 2, 3, std::nullopt}), InputError);
  EXPECT_THROW(apply_disruption(w, {DisruptionKind::sfg_quarantine, "CAP-FG", 2, 3, std::nullopt}), InputError);
  EXPECT_THROW(apply_disruption(w, {DisruptionKind::raw_material_delay, "RM1", 14, 1, std::nullopt}), InputError);
  EXPECT_THROW(apply_disruption(w, {DisruptionKind::raw_material_delay, "RM1", 0, 0, std::nullopt}), InputError);
  EXPECT_THROW(apply_disruption(w, {DisruptionKind::raw_material_delay, "nope", 0, 1, std::nullopt}), InputError);
}

TEST(Disruption, ResetRestoresTheBaseline)
{
  const auto w = fig2().world;
  auto out = apply_disruption(w, {DisruptionKind::line_stoppage, "CAP-FG", 0, 14, std::nullopt});
  out.world.orders.at("FG1-O1").committed.clear();
  reset_to_baseline(out.world);
  EXPECT_EQ(out.world.packages, w.packages);
  EXPECT_EQ(out.world.orders, w.orders);
  EXPECT_EQ(out.world.supply, w.supply);
}

//==============================================================================
TEST(Degradation, OnlyLaterOrSmallerCommitmentsPass)
{
  auto w = fig2().world;
  EXPECT_TRUE(check_degradation(w).empty());
  w.orders.at("FG1-O1").committed = {{5, 10}, {7, 10}};
  EXPECT_TRUE(check_degradation(w).empty());
  w.orders.at("FG1-O1").committed = {{4, 20}};
  const auto v = check_degradation(w);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.front().agent, "FG1");
  EXPECT_EQ(v.front().day, 4);
}
