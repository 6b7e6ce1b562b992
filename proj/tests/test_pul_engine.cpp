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

#include "pulsim/error.hpp"
#include "pulsim/pul_engine.hpp"

using namespace pulsim;

namespace {

constexpr uint64_t kCycle = 6667;

struct Rig {
    MainMemory memory{DeviceProfile::nvm(), ChannelProfile::system(), uint64_t{1} << 30};
    Scratchpad pad{64 * 1024};
    PulEngine engine;
    explicit Rig(PulEngineConfig cfg = {}) : engine(memory, pad, cfg, kCycle) {}
};

SimTime cyc(uint64_t n) { return SimTime::from_ps(n * kCycle); }

}  // namespace

TEST(PulEngine, SizeRegisterWritesAreSkippedWhenUnchanged) {
    Rig r;
    EXPECT_EQ(r.engine.set_transfer_size(128), 1u);
    EXPECT_EQ(r.engine.set_transfer_size(128), 0u);
    EXPECT_EQ(r.engine.set_transfer_size(64), 1u);
    EXPECT_EQ(r.engine.size_register_writes(), 2u);
}

TEST(PulEngine, InvalidSizesAreRejected) {
    Rig r;
    for (uint32_t bad : {0u, 4u, 12u, 64u * 1024 + 8}) {
        try {
            r.engine.set_transfer_size(bad);
            ADD_FAILURE() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidTransferSize);
        }
    }
    try {
        r.engine.submit(DmaDirection::Unload, 0, 0, 0, SimTime{});
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroSizeTransfer);
    }
}

TEST(PulEngine, PreloadUsesDefaultSizeAndIssueOverhead) {
    Rig r;
    const EnqueueResult e = r.engine.preload(0, 0, SimTime{});
    EXPECT_EQ(e.issue_cycles, 4u);
    EXPECT_EQ(e.resume_at, cyc(4));
    EXPECT_EQ(e.ticket.request.size_bytes, 64u);
    EXPECT_EQ(e.ticket.completion_time.ps(), 4 * kCycle + 350'000 + 7451);
    const EnqueueResult u = r.engine.unload(128, 4096, 256, e.resume_at);
    EXPECT_EQ(u.issue_cycles, 6u);
    EXPECT_EQ(r.engine.bytes(DmaDirection::Unload), 256u);
}

TEST(PulEngine, FullFifoStallsUntilOldestCompletes) {
    PulEngineConfig cfg;
    cfg.fifo_depth = 2;
    Rig r(cfg);
    auto a = r.engine.preload(0, 0, SimTime{});
    auto b = r.engine.preload(64, 64, a.resume_at);
    auto c = r.engine.preload(128, 128, b.resume_at);
    EXPECT_EQ(a.stall_cycles + b.stall_cycles, 0u);
    const uint64_t free_cycle = cycles_ceil(a.ticket.completion_time.ps(), kCycle);
    EXPECT_EQ(c.resume_at, cyc(free_cycle));
    EXPECT_EQ(c.stall_cycles, free_cycle - 12);
}

TEST(PulEngine, PendingCountsAndWaitThresholds) {
    Rig r;
    std::vector<SimTime> done;
    SimTime t;
    for (int i = 0; i < 4; ++i) {
        auto e = r.engine.preload(uint64_t(i) * 64, uint32_t(i) * 64, t);
        done.push_back(e.ticket.completion_time);
        t = e.resume_at;
    }
    EXPECT_EQ(r.engine.pending(WaitKind::Preloads, t), 4u);
    EXPECT_EQ(r.engine.pending(WaitKind::Unloads, t), 0u);
    EXPECT_EQ(r.engine.pending(WaitKind::Preloads, done[1]), 2u);
    EXPECT_EQ(r.engine.time_when_at_most(WaitKind::Preloads, 1, t), done[2]);
    EXPECT_EQ(r.engine.time_when_at_most(WaitKind::All, 4, t), t);
    EXPECT_EQ(r.engine.completed(DmaDirection::Preload, done[3]), 4u);
}

TEST(PulEngine, WaitPollsUntilTheCycleThatObservesCompletion) {
    Rig r;
    auto e = r.engine.preload(0, 0, SimTime{});
    const WaitResult w = r.engine.wait(WaitKind::Preloads, e.resume_at);
    const uint64_t done_cycle = cycles_ceil(e.ticket.completion_time.ps(), kCycle);
    EXPECT_EQ(w.resume_at, cyc(done_cycle));
    EXPECT_EQ(w.poll_cycles, 1u);
    EXPECT_EQ(w.stall_cycles, done_cycle - 4 - 1);
    EXPECT_TRUE(r.pad.in_flight().empty());
    // Nothing pending: a single status read.
    const WaitResult idle = r.engine.wait(WaitKind::All, w.resume_at);
    EXPECT_EQ(idle.stall_cycles, 0u);
    EXPECT_EQ(idle.resume_at, w.resume_at + cyc(1));
}

TEST(PulEngine, StatusIsPerTaskletWhenScoped) {
    Rig r;
    r.engine.submit(DmaDirection::Preload, 0, 0, 64, SimTime{}, 0);
    r.engine.submit(DmaDirection::Preload, 64, 64, 64, SimTime{}, 1);
    r.engine.submit(DmaDirection::Unload, 128, 128, 64, SimTime{}, 1);
    EXPECT_EQ(r.engine.sample_status(SimTime{}, 0), (PulStatus{1, 0}));
    EXPECT_EQ(r.engine.sample_status(SimTime{}, 1), (PulStatus{1, 1}));
    EXPECT_EQ(r.engine.sample_status(SimTime{}), (PulStatus{2, 1}));
}

TEST(PulEngine, StatusReadRetiresCompletedPadRegions) {
    Rig r;
    auto e = r.engine.preload(0, 0, SimTime{});
    EXPECT_EQ(r.pad.in_flight().size(), 1u);
    EXPECT_THROW(r.pad.read(0, 8, e.ticket.completion_time), Error);
    r.engine.status(e.ticket.completion_time);
    EXPECT_NO_THROW(r.pad.read(0, 8, e.ticket.completion_time));
}

TEST(PulEngine, OverlappingPreloadIntoPendingSlotIsAHazard) {
    Rig r;
    r.engine.preload(0, 0, SimTime{});
    try {
        r.engine.preload(64, 32, cyc(4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DmaOverlapsPendingRegion);
    }
}
