/*
 * Copyright 2026 The pulsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "pulsim/error.hpp"
#include "pulsim/sim.hpp"

using namespace pulsim;

TEST(SimTime, CyclePeriodsRoundToNearestPicosecond) {
    EXPECT_EQ(cycle_period_ps(150), 6667u);
    EXPECT_EQ(cycle_period_ps(350), 2857u);
    EXPECT_EQ(cycle_period_ps(1000), 1000u);
    EXPECT_EQ(cycles_ceil(0, 6667), 0u);
    EXPECT_EQ(cycles_ceil(6667, 6667), 1u);
    EXPECT_EQ(cycles_ceil(6668, 6667), 2u);
}

TEST(SimTime, ArithmeticAndUnits) {
    const SimTime a = SimTime::from_ns(350);
    EXPECT_EQ(a.ps(), 350'000u);
    EXPECT_EQ((a + SimTime::from_ps(999)).nanos(), 350u);
    EXPECT_DOUBLE_EQ(SimTime::from_ps(1500).ns(), 1.5);
    EXPECT_LT(SimTime::from_ps(1), SimTime::from_ps(2));
}

TEST(Simulator, DispatchesByTimeThenInsertionOrder) {
    Simulator sim;
    std::vector<uint64_t> order;
    const HandlerId h = sim.add_handler("h", [&](Simulator&, const Event& e) { order.push_back(e.payload); });
    sim.schedule(SimTime::from_ps(20), h, 0, 1);
    sim.schedule(SimTime::from_ps(10), h, 0, 2);
    sim.schedule(SimTime::from_ps(20), h, 0, 3);
    sim.schedule(SimTime::from_ps(10), h, 0, 4);
    EXPECT_EQ(sim.run_until_idle().ps(), 20u);
    EXPECT_EQ(order, (std::vector<uint64_t>{2, 4, 1, 3}));
    EXPECT_EQ(sim.dispatched(), 4u);
}

TEST(Simulator, RandomScheduleMatchesStableSortOracle) {
    std::mt19937_64 rng(7);
    Simulator sim;
    std::vector<std::pair<uint64_t, uint64_t>> expected;  // (time, payload)
    std::vector<uint64_t> seen;
    const HandlerId h = sim.add_handler("h", [&](Simulator&, const Event& e) { seen.push_back(e.payload); });
    for (uint64_t i = 0; i < 2000; ++i) {
        const uint64_t t = rng() % 50;
        expected.emplace_back(t, i);
        sim.schedule(SimTime::from_ps(t), h, 0, i);
    }
    std::stable_sort(expected.begin(), expected.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    sim.run_until_idle();
    ASSERT_EQ(seen.size(), expected.size());
    for (size_t i = 0; i < seen.size(); ++i) EXPECT_EQ(seen[i], expected[i].second);
}

TEST(Simulator, HandlersMayScheduleAtTheCurrentInstant) {
    Simulator sim;
    int fired = 0;
    HandlerId h = 0;
    h = sim.add_handler("h", [&](Simulator& s, const Event& e) {
        ++fired;
        if (e.payload < 3) s.schedule(s.now(), h, 0, e.payload + 1);
    });
    sim.schedule(SimTime::from_ps(5), h);
    sim.run_until_idle();
    EXPECT_EQ(fired, 4);
    EXPECT_EQ(sim.now().ps(), 5u);
}

TEST(Simulator, SchedulingInThePastThrows) {
    Simulator sim;
    HandlerId h = 0;
    h = sim.add_handler("h", [&](Simulator& s, const Event&) { s.schedule(SimTime::from_ps(1), h); });
    sim.schedule(SimTime::from_ps(10), h);
    try {
        sim.run_until_idle();
        FAIL() << "expected SchedulingInPast";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SchedulingInPast);
    }
}

TEST(Simulator, CancelledEventsNeverFire) {
    Simulator sim;
    int fired = 0;
    const HandlerId h = sim.add_handler("h", [&](Simulator&, const Event&) { ++fired; });
    const EventHandle a = sim.schedule(SimTime::from_ps(1), h);
    sim.schedule(SimTime::from_ps(2), h);
    EXPECT_EQ(sim.queue_depth(), 2u);
    EXPECT_TRUE(sim.cancel(a));
    EXPECT_FALSE(sim.cancel(a));
    EXPECT_EQ(sim.queue_depth(), 1u);
    sim.run_until_idle();
    EXPECT_EQ(fired, 1);
    EXPECT_FALSE(sim.cancel(a + 1));  // already fired
}

TEST(Simulator, EventLimitStopsRunawayModels) {
    Simulator sim;
    HandlerId h = 0;
    h = sim.add_handler("loop", [&](Simulator& s, const Event&) { s.schedule(s.now() + SimTime::from_ps(1), h); });
    sim.set_event_limit(100);
    sim.schedule(SimTime{}, h);
    try {
        sim.run_until_idle();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EventLimitExceeded);
    }
    EXPECT_EQ(sim.dispatched(), 100u);
}

TEST(Simulator, TraceListsOneLinePerDispatch) {
    Simulator sim;
    std::ostringstream out;
    sim.set_trace(&out);
    sim.set_kind_names({"start", "tick"});
    const HandlerId h = sim.add_handler("pe0", [](Simulator&, const Event&) {});
    sim.schedule(SimTime::from_ns(3), h, 1);
    sim.schedule(SimTime::from_ns(1), h, 7);
    sim.run_until_idle();
    EXPECT_EQ(out.str(), "1,2,pe0,7\n3,1,pe0,tick\n");
}

TEST(Simulator, EmptyQueueReturnsZero) {
    Simulator sim;
    EXPECT_EQ(sim.run_until_idle().ps(), 0u);
}
