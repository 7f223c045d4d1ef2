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

#include <resched/optimizers.hpp>
#include <resched/oracle.hpp>

#include <gtest/gtest.h>

using namespace resched;

namespace {

AllocationProblem two_orders_same_day()
{
  AllocationProblem p;
  p.horizon = 1;
  p.mode = AllocationMode::partial;
  p.orders = {{"A", {{0, 5}}, 2}, {"B", {{0, 5}}, 1}};
  p.supply = {{0, 6}};
  return p;
}

} // namespace

//==============================================================================
TEST(Partial, HigherPriorityFilledFirst)
{
  const auto p = two_orders_same_day();
  const auto a = solve_partial(p);
  EXPECT_EQ(a.x.at("A"), (DayMap{{0, 5}}));
  EXPECT_EQ(a.x.at("B"), (DayMap{{0, 1}}));
  EXPECT_EQ(a.objective, 11);
  EXPECT_EQ(brute_force_oracle(p).objective, 11);
}

TEST(Partial, AmpleSupplyDeliversOnDemandDays)
{
  AllocationProblem p;
  p.horizon = 4;
  p.orders = {{"A", {{1, 3}}, 1}, {"B", {{3, 2}}, 2}};
  p.supply = {{0, 10}};
  p.no_early_delivery = true;
  const auto a = solve_partial(p);
  EXPECT_EQ(a.x.at("A"), (DayMap{{1, 3}}));
  EXPECT_EQ(a.x.at("B"), (DayMap{{3, 2}}));
}

TEST(Partial, ZeroSupplyAllocatesNothing)
{
  auto p = two_orders_same_day();
  p.supply.clear();
  const auto a = solve_partial(p);
  EXPECT_TRUE(a.x.empty());
  EXPECT_EQ(a.objective, 0);
}

TEST(Partial, LateSupplyDelaysDelivery)
{
  AllocationProblem p;
  p.horizon = 5;
  p.orders = {{"A", {{1, 4}}, 1}};
  p.supply = {{1, 1}, {3, 3}};
  p.no_early_delivery = true;
  const auto a = solve_partial(p);
  EXPECT_EQ(a.x.at("A"), (DayMap{{1, 1}, {3, 3}}));
}

TEST(Partial, TiesGoToLowerId)
{
  AllocationProblem p;
  p.horizon = 1;
  p.orders = {{"B", {{0, 3}}, 1}, {"A", {{0, 3}}, 1}};
  p.supply = {{0, 4}};
  const auto a = solve_partial(p);
  EXPECT_EQ(a.allocated("A"), 3);
  EXPECT_EQ(a.allocated("B"), 1);
}

TEST(Partial, CustomPriorityWeights)
{
  auto p = two_orders_same_day();
  WeightConfig w;
  w.priority_weight = {{1, 10}, {2, 11}};
  EXPECT_EQ(solve_partial(p, w).objective, 5 * 11 + 1 * 10);
}

TEST(Partial, RejectsMalformedProblems)
{
  auto p = two_orders_same_day();
  p.orders[0].demand = {{3, 1}};
  EXPECT_THROW(solve_partial(p), ProblemError);

  p = two_orders_same_day();
  p.orders[1].id = "A";
  EXPECT_THROW(solve_partial(p), ProblemError);

  p = two_orders_same_day();
  p.supply = {{0, -1}};
  EXPECT_THROW(solve_partial(p), ProblemError);

  p = two_orders_same_day();
  p.mode = AllocationMode::capacity;
  EXPECT_THROW(solve_partial(p), ProblemError);
}

TEST(Weights, InvariantsAreEnforced)
{
  auto p = two_orders_same_day();
  WeightConfig w;
  w.priority_weight = {{1, 3}, {2, 3}};
  EXPECT_THROW(solve_partial(p, w), ProblemError);

  w = {};
  w.day_attenuation = {1};
  p.horizon = 2;
  EXPECT_THROW(solve_partial(p, w), ProblemError);

  w = {};
  w.fulfillment_weight = {{"A", 0}};
  p.mode = AllocationMode::all_or_nothing;
  EXPECT_THROW(solve_all_or_nothing(p, w), ProblemError);
}

//==============================================================================
TEST(AllOrNothing, PicksTheLargerOrderThatFits)
{
  AllocationProblem p;
  p.horizon = 2;
  p.mode = AllocationMode::all_or_nothing;
  p.orders = {{"A", {{1, 4}}, 1}, {"B", {{1, 3}}, 1}};
  p.supply = {{1, 5}};
  WeightConfig w;
  w.fulfillment_weight = {{"A", 1}, {"B", 1}};
  w.adherence_weight = {{"A", 1}, {"B", 1}};
  const auto a = solve_all_or_nothing(p, w);
  EXPECT_EQ(a.x.at("A"), (DayMap{{1, 4}}));
  EXPECT_EQ(a.allocated("B"), 0);
  EXPECT_EQ(a.objective, 4);
  EXPECT_EQ(brute_force_oracle(p, w).objective, 4);
}

TEST(AllOrNothing, PartialDeliveryIsWorseThanNone)
{
  AllocationProblem p;
  p.horizon = 1;
  p.mode = AllocationMode::all_or_nothing;
  p.orders = {{"A", {{0, 4}}, 1}};
  p.supply = {{0, 2}};
  WeightConfig w;
  w.adherence_weight = {{"A", 1}};
  const auto a = solve_all_or_nothing(p, w);
  EXPECT_EQ(a.allocated("A"), 0);
  EXPECT_EQ(a.objective, 0);
  // x = 2 would score 2 + 1 * 2 * (2 - 4) = -2.
  EXPECT_EQ(evaluate(p, w, {{"A", {{0, 2}}}}), -2);
}

TEST(AllOrNothing, AmpleSupplyFulfillsEverything)
{
  AllocationProblem p;
  p.horizon = 3;
  p.mode = AllocationMode::all_or_nothing;
  p.orders = {{"A", {{0, 2}, {2, 1}}, 1}, {"B", {{1, 3}}, 2}};
  p.supply = {{0, 10}};
  const auto a = solve_all_or_nothing(p);
  EXPECT_EQ(a.x.at("A"), (DayMap{{0, 2}, {2, 1}}));
  EXPECT_EQ(a.x.at("B"), (DayMap{{1, 3}}));
  EXPECT_EQ(a.objective, 6);
}

TEST(AllOrNothing, EmptyProblem)
{
  AllocationProblem p;
  p.horizon = 3;
  p.mode = AllocationMode::all_or_nothing;
  EXPECT_EQ(solve_all_or_nothing(p).objective, 0);
  EXPECT_EQ(brute_force_oracle(p).objective, 0);
}

//==============================================================================
TEST(Consolidation, LatestReductionThatCoversEverySupplier)
{
  ReductionProblem p;
  p.horizon = 2;
  p.requests = {{"S1", {{0, 2}}}, {"S2", {{1, 3}}}};
  p.day_weights = {2, 1};
  const auto plan = solve_consolidation(p);
  EXPECT_EQ(plan.r, (DayMap{{0, 2}, {1, 1}}));
  EXPECT_EQ(plan.objective, 5);
  EXPECT_EQ(brute_force_oracle(p).objective, 5);
}

TEST(Consolidation, NoRequestsNoReduction)
{
  ReductionProblem p;
  p.horizon = 3;
  p.requests = {{"S1", {}}};
  const auto plan = solve_consolidation(p);
  EXPECT_TRUE(plan.r.empty());
  EXPECT_EQ(plan.objective, 0);

  p.requests.clear();
  EXPECT_TRUE(solve_consolidation(p).r.empty());
}

TEST(Consolidation, DuplicateSupplierChangesNothing)
{
  ReductionProblem one;
  one.horizon = 4;
  one.requests = {{"S1", {{1, 2}, {3, 1}}}};
  auto two = one;
  two.requests.push_back({"S2", {{1, 2}, {3, 1}}});
  EXPECT_EQ(solve_consolidation(one), solve_consolidation(two));
}

TEST(Consolidation, RejectsNonDecreasingWeights)
{
  ReductionProblem p;
  p.horizon = 2;
  p.requests = {{"S1", {{0, 1}}}};
  p.day_weights = {1, 1};
  EXPECT_THROW(solve_consolidation(p), ProblemError);
}

//==============================================================================
TEST(Capacity, FillsEachDayUpToCapacity)
{
  AllocationProblem p;
  p.horizon = 2;
  p.mode = AllocationMode::capacity;
  p.orders = {{"A", {{0, 4}}, 1}, {"B", {{1, 2}}, 1}};
  p.supply = {{0, 3}, {1, 3}};
  const auto a = solve_capacity(p);
  EXPECT_EQ(a.x.at("A"), (DayMap{{0, 3}, {1, 1}}));
  EXPECT_EQ(a.x.at("B"), (DayMap{{1, 2}}));
  EXPECT_EQ(a.objective, 6);
  EXPECT_EQ(brute_force_oracle(p).objective, 6);
}

TEST(Capacity, StoppedLineProducesNothing)
{
  AllocationProblem p;
  p.horizon = 3;
  p.mode = AllocationMode::capacity;
  p.orders = {{"A", {{0, 4}}, 1}};
  const auto a = solve_capacity(p);
  EXPECT_TRUE(a.x.empty());
  EXPECT_EQ(a.objective, 0);
}

TEST(Capacity, AmpleCapacityKeepsDemandDays)
{
  AllocationProblem p;
  p.horizon = 3;
  p.mode = AllocationMode::capacity;
  p.no_early_delivery = true;
  p.orders = {{"A", {{0, 2}, {2, 2}}, 1}, {"B", {{1, 3}}, 1}};
  p.supply = {{0, 5}, {1, 5}, {2, 5}};
  const auto a = solve_capacity(p);
  EXPECT_EQ(a.x.at("A"), (DayMap{{0, 2}, {2, 2}}));
  EXPECT_EQ(a.x.at("B"), (DayMap{{1, 3}}));
}

TEST(Capacity, HigherPriorityKeepsItsSlot)
{
  AllocationProblem p;
  p.horizon = 2;
  p.mode = AllocationMode::capacity;
  p.no_early_delivery = true;
  p.orders = {{"A", {{0, 3}}, 1}, {"B", {{0, 3}}, 3}};
  p.supply = {{0, 3}, {1, 3}};
  const auto a = solve_capacity(p);
  EXPECT_EQ(a.x.at("B"), (DayMap{{0, 3}}));
  EXPECT_EQ(a.x.at("A"), (DayMap{{1, 3}}));
}

//==============================================================================
TEST(Oracle, GivesUpOnHugeInstances)
{
  AllocationProblem p;
  p.horizon = 5;
  p.orders = {{"A", {{4, 50}}, 1}, {"B", {{4, 50}}, 1}, {"C", {{4, 50}}, 1}};
  p.supply = {{0, 150}};
  EXPECT_THROW(brute_force_oracle(p, {}, {1000}), ProblemError);
}

TEST(Oracle, ZeroSupplyIsNotAnError)
{
  AllocationProblem p;
  p.horizon = 2;
  p.orders = {{"A", {{1, 3}}, 1}};
  const auto a = brute_force_oracle(p);
  EXPECT_EQ(a.objective, 0);
  EXPECT_TRUE(a.x.empty());
}
