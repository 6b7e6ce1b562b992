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

#include "pulsim/error.hpp"
#include "pulsim/memory.hpp"

using namespace pulsim;

namespace {

DmaRequest req(DmaDirection d, uint64_t addr, uint32_t size) {
    DmaRequest r;
    r.direction = d;
    r.main_addr = addr;
    r.size_bytes = size;
    return r;
}

constexpr uint64_t kRegion = uint64_t{1} << 30;

}  // namespace

TEST(Profiles, NamedProfilesCarryPublishedTimings) {
    EXPECT_EQ(DeviceProfile::dram().read_latency_ns, 100u);
    EXPECT_EQ(DeviceProfile::dram().write_latency_ns, 100u);
    EXPECT_EQ(DeviceProfile::nvm().read_latency_ns, 350u);
    EXPECT_EQ(DeviceProfile::nvm().write_latency_ns, 170u);
    EXPECT_EQ(ChannelProfile::system().bandwidth_bytes_per_sec, uint64_t{8} << 30);
    EXPECT_EQ(DeviceProfile::by_name("nvm").label, "nvm");
    EXPECT_EQ(ChannelProfile::by_name("upmem_mram").bandwidth_bytes_per_sec, uint64_t{1} << 29);
}

TEST(Profiles, UnknownNamesAreConfigErrors) {
    EXPECT_THROW(DeviceProfile::by_name("hbm"), Error);
    try {
        ChannelProfile::by_name("pcie");
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid);
    }
}

TEST(MainMemory, SingleReadPaysLatencyThenTransfer) {
    MainMemory m(DeviceProfile::nvm(), ChannelProfile::system(), kRegion);
    const auto t = m.submit(req(DmaDirection::Preload, 0, 64), SimTime::from_ns(10));
    // 64 B at 8 GiB/s = 7.450580596923828 ns, rounded up to the picosecond.
    EXPECT_EQ(m.transfer_time_ps(64), 7451u);
    EXPECT_EQ(t.transfer_start.ps(), 360'000u);
    EXPECT_EQ(t.completion_time.ps(), 367'451u);
    EXPECT_EQ(t.queued_channel_wait_ps, 0u);
}

TEST(MainMemory, WritesUseWriteLatency) {
    MainMemory m(DeviceProfile::nvm(), ChannelProfile::system(), kRegion);
    const auto t = m.submit(req(DmaDirection::Unload, 0, 8), SimTime{});
    EXPECT_EQ(t.transfer_start.ps(), 170'000u);
    EXPECT_EQ(m.bytes_written(), 8u);
    EXPECT_EQ(m.bytes_read(), 0u);
}

TEST(MainMemory, LatenciesOverlapButChannelSerializesInArrivalOrder) {
    MainMemory m(DeviceProfile::dram(), {"slow", 1'000'000'000}, kRegion);  // 1 B/ns
    const auto a = m.submit(req(DmaDirection::Preload, 0, 1000), SimTime{});
    const auto b = m.submit(req(DmaDirection::Preload, 4096, 1000), SimTime::from_ns(1));
    EXPECT_EQ(a.transfer_start.ps(), 100'000u);
    EXPECT_EQ(a.completion_time.ps(), 1'100'000u);
    EXPECT_EQ(b.transfer_start.ps(), 1'100'000u);
    EXPECT_EQ(b.completion_time.ps(), 2'100'000u);
    EXPECT_EQ(b.queued_channel_wait_ps, 999'000u);
}

TEST(MainMemory, RandomStreamMatchesRecurrenceOracle) {
    std::mt19937_64 rng(11);
    MainMemory m(DeviceProfile::nvm(), ChannelProfile::system(), kRegion);
    uint64_t now = 0;
    uint64_t free = 0;
    for (int i = 0; i < 1000; ++i) {
        now += rng() % 20'000;
        const bool pre = rng() % 2;
        const uint32_t size = 8 * static_cast<uint32_t>(1 + rng() % 512);
        const auto t = m.submit(req(pre ? DmaDirection::Preload : DmaDirection::Unload, 0, size),
                                SimTime::from_ps(now));
        const uint64_t lat = pre ? 350'000 : 170'000;
        const uint64_t xfer =
            (uint64_t{size} * 1'000'000'000'000ULL + (uint64_t{8} << 30) - 1) / (uint64_t{8} << 30);
        free = std::max(now + lat, free) + xfer;
        ASSERT_EQ(t.completion_time.ps(), free);
    }
    EXPECT_EQ(m.transfers(), 1000u);
    EXPECT_EQ(m.last_completion().ps(), free);
}

TEST(MainMemory, ThroughputNeverExceedsChannelBandwidth) {
    MainMemory m(DeviceProfile::dram(), ChannelProfile::system(), kRegion);
    for (int i = 0; i < 1000; ++i) m.submit(req(DmaDirection::Preload, 0, 4096), SimTime{});
    const double bw = m.observed_throughput(m.first_transfer_start(), m.last_completion());
    EXPECT_LE(bw, 8.0 * (1u << 30) * (1 + 1e-9));
    EXPECT_GT(bw, 8.0 * (1u << 30) * 0.999);
}

TEST(MainMemory, ThroughputProratesStraddlingTransfers) {
    MainMemory m(DeviceProfile::dram(), {"b", 1'000'000'000}, kRegion);
    m.submit(req(DmaDirection::Preload, 0, 1000), SimTime{});  // [100 ns, 1100 ns)
    // Half the transfer lies in [600 ns, 1100 ns): 500 B over 1000 ns.
    EXPECT_DOUBLE_EQ(m.observed_throughput(SimTime::from_ns(600), SimTime::from_ns(1600)), 5e8);
    EXPECT_DOUBLE_EQ(m.observed_throughput(SimTime::from_ns(2000), SimTime::from_ns(3000)), 0.0);
}

TEST(MainMemory, ErrorPaths) {
    MainMemory m(DeviceProfile::dram(), ChannelProfile::system(), 4096);
    auto code = [&](auto f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::ConfigInvalid;
    };
    EXPECT_EQ(code([&] { m.submit(req(DmaDirection::Preload, 0, 0), SimTime{}); }),
              ErrorCode::ZeroSizeTransfer);
    EXPECT_EQ(code([&] { m.submit(req(DmaDirection::Preload, 4090, 8), SimTime{}); }),
              ErrorCode::AddressOutOfRange);
    m.submit(req(DmaDirection::Preload, 0, 8), SimTime::from_ns(5));
    EXPECT_EQ(code([&] { m.submit(req(DmaDirection::Preload, 0, 8), SimTime::from_ns(4)); }),
              ErrorCode::SchedulingInPast);
    EXPECT_EQ(code([&] { m.observed_throughput(SimTime::from_ns(5), SimTime::from_ns(5)); }),
              ErrorCode::EmptyWindow);
    EXPECT_THROW(MainMemory({"x", 0, 1}, ChannelProfile::system(), 1), Error);
    EXPECT_THROW(MainMemory(DeviceProfile::dram(), {"x", 0}, 1), Error);
}

TEST(MainMemory, ValueStoreFallsBackToDeterministicPattern) {
    MainMemory m(DeviceProfile::dram(), ChannelProfile::system(), 4096);
    EXPECT_EQ(m.load_word(64), MainMemory::initial_word(64));
    EXPECT_EQ(MainMemory::initial_word(64), MainMemory::initial_word(71));
    EXPECT_LE(MainMemory::initial_word(12345), 0xffffu);
    m.store_word(64, 42);
    EXPECT_EQ(m.load_word(68), 42u);
}
