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

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "pulsim/dma_request.hpp"
#include "pulsim/sim.hpp"

namespace pulsim {

/// Access latencies of a memory technology. NVM is modelled as DRAM with
/// injected latencies, the way a latency emulator sits in front of DDR.
struct DeviceProfile {
    std::string label;
    uint64_t read_latency_ns = 0;
    uint64_t write_latency_ns = 0;

    static DeviceProfile dram() { return {"dram", 100, 100}; }
    static DeviceProfile nvm() { return {"nvm", 350, 170}; }
    /// Throws ConfigInvalid for unknown names.
    static DeviceProfile by_name(const std::string& name);
};

/// The single shared channel all PEs of a device arbitrate for.
struct ChannelProfile {
    std::string label;
    uint64_t bandwidth_bytes_per_sec = 0;

    static constexpr uint64_t kGiB = uint64_t{1} << 30;
    static ChannelProfile system() { return {"system", 8 * kGiB}; }
    /// Per-DPU MRAM path of a PIM module.
    static ChannelProfile upmem_mram() { return {"upmem_mram", kGiB / 2}; }
    /// MRAM path tuned so a 16-tasklet SUM over 32 B rows lands near IPC 0.55.
    static ChannelProfile upmem_calibrated() { return {"upmem_calibrated", 1'300'000'000}; }
    static ChannelProfile by_name(const std::string& name);
};

struct TransferTicket {
    uint64_t id = 0;
    DmaRequest request;
    SimTime issue_time;
    SimTime transfer_start;  ///< channel acquired
    SimTime completion_time;
    uint64_t queued_channel_wait_ps = 0;  ///< time spent ready but waiting for the channel
};

/// Main memory behind one bandwidth-limited channel.
///
/// A request first spends the device latency (reads use the read latency,
/// unloads the write latency); latency phases of different requests overlap
/// freely. It then occupies the channel for size/bandwidth, and channel
/// occupancy is granted strictly in arrival order:
///
///   transfer_start = max(now + latency, channel_free)
///   completion     = transfer_start + size / bandwidth
class MainMemory {
public:
    MainMemory(DeviceProfile device, ChannelProfile channel, uint64_t region_bytes);

    /// Submissions must arrive in non-decreasing `now`.
    TransferTicket submit(const DmaRequest& request, SimTime now);

    /// Channel throughput in bytes/s over [begin, end). Bytes of transfers
    /// straddling a window edge are prorated by their overlap.
    double observed_throughput(SimTime begin, SimTime end) const;

    /// Channel occupancy of one transfer of `size` bytes, rounded up to a picosecond.
    uint64_t transfer_time_ps(uint64_t size) const;
    uint64_t latency_ps(DmaDirection d) const;

    const DeviceProfile& device() const { return device_; }
    const ChannelProfile& channel() const { return channel_; }
    uint64_t region_bytes() const { return region_bytes_; }
    SimTime channel_free_at() const { return channel_free_; }

    uint64_t bytes_read() const { return bytes_read_; }
    uint64_t bytes_written() const { return bytes_written_; }
    uint64_t transfers() const { return phases_.size(); }
    SimTime first_transfer_start() const;
    SimTime last_completion() const { return channel_free_; }

    // Value-check mode: content of 8-byte words. Unwritten words hold a
    // deterministic pattern derived from the address.
    static uint64_t initial_word(uint64_t addr);
    uint64_t load_word(uint64_t addr) const;
    void store_word(uint64_t addr, uint64_t value);

private:
    struct Phase {
        uint64_t start_ps;
        uint64_t end_ps;
        uint64_t bytes;
    };

    DeviceProfile device_;
    ChannelProfile channel_;
    uint64_t region_bytes_;
    SimTime channel_free_;
    SimTime last_submit_;
    uint64_t next_id_ = 1;
    uint64_t bytes_read_ = 0;
    uint64_t bytes_written_ = 0;
    std::vector<Phase> phases_;
    std::unordered_map<uint64_t, uint64_t> written_;
};

}  // namespace pulsim
