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
#include <deque>
#include <optional>
#include <string_view>

#include "pulsim/dma_request.hpp"
#include "pulsim/memory.hpp"
#include "pulsim/scratchpad.hpp"
#include "pulsim/sim.hpp"

namespace pulsim {

struct PulEngineConfig {
    uint32_t fifo_depth = 64;
    uint32_t issue_overhead_preload = 4;  ///< two address writes + dispatch
    uint32_t issue_overhead_unload = 6;   ///< adds the explicit size write
    uint32_t default_transfer_size = 64;
};

enum class WaitKind : uint8_t { Preloads, Unloads, All };

constexpr std::string_view to_string(WaitKind k) {
    switch (k) {
        case WaitKind::Preloads: return "preloads";
        case WaitKind::Unloads: return "unloads";
        case WaitKind::All: return "all";
    }
    return "?";
}

struct PulStatus {
    uint32_t preloads_pending = 0;
    uint32_t unloads_pending = 0;
    auto operator<=>(const PulStatus&) const = default;
};

/// Timing outcome of an enqueue issued by a single-threaded caller.
struct EnqueueResult {
    TransferTicket ticket;
    uint64_t stall_cycles = 0;  ///< back-pressure: FIFO was full
    uint64_t issue_cycles = 0;
    SimTime resume_at;          ///< when the PE may execute its next instruction
};

struct WaitResult {
    uint64_t stall_cycles = 0;  ///< failed polls spinning on the status register
    uint64_t poll_cycles = 0;   ///< the final, successful status read
    SimTime resume_at;
};

/// The preload/unload DMA engine attached to one PE.
///
/// Two bounded FIFOs hold outstanding requests; a slot frees when its
/// transfer completes. The PE only learns about completions by reading the
/// status register, so scratchpad regions stay marked in flight until then.
class PulEngine {
public:
    static constexpr uint32_t kNoTasklet = UINT32_MAX;

    PulEngine(MainMemory& memory, Scratchpad& pad, PulEngineConfig config, uint64_t cycle_ps);

    /// Returns cycles charged: 1 if the register changed, 0 if the write was skipped.
    uint64_t set_transfer_size(uint32_t bytes);
    uint32_t transfer_size() const { return size_register_; }
    uint64_t size_register_writes() const { return register_writes_; }

    // Single-threaded timing helpers. `now` must be on the PE's cycle grid.
    EnqueueResult preload(uint64_t main_addr, uint32_t pad_offset, SimTime now);
    EnqueueResult unload(uint32_t pad_offset, uint64_t main_addr, uint32_t size_bytes, SimTime now);
    /// Polls until the selected pending count reaches zero.
    WaitResult wait(WaitKind kind, SimTime now);
    /// One status-register read (one cycle); retires completed pad regions.
    PulStatus status(SimTime now);

    // Building blocks shared with the multi-tasklet PE model.

    /// Validates and hands a request to memory; marks the pad region in flight.
    TransferTicket submit(DmaDirection dir, uint64_t main_addr, uint32_t pad_offset,
                          uint32_t size_bytes, SimTime now, uint32_t tasklet = kNoTasklet);
    bool fifo_full(DmaDirection dir, SimTime now) const;
    /// Completion time of the oldest outstanding request in `dir`'s FIFO.
    SimTime oldest_completion(DmaDirection dir, SimTime now) const;
    uint32_t pending(WaitKind kind, SimTime now, uint32_t tasklet = kNoTasklet) const;
    /// Earliest time at which pending(kind) <= at_most.
    SimTime time_when_at_most(WaitKind kind, uint32_t at_most, SimTime now,
                              uint32_t tasklet = kNoTasklet) const;
    PulStatus sample_status(SimTime now, uint32_t tasklet = kNoTasklet);

    uint32_t issue_overhead(DmaDirection dir) const {
        return dir == DmaDirection::Preload ? config_.issue_overhead_preload
                                            : config_.issue_overhead_unload;
    }
    uint64_t enqueued(DmaDirection dir) const { return enqueued_[idx(dir)]; }
    uint64_t completed(DmaDirection dir, SimTime now) const;
    uint64_t bytes(DmaDirection dir) const { return bytes_[idx(dir)]; }
    const PulEngineConfig& config() const { return config_; }
    uint64_t cycle_ps() const { return cycle_ps_; }

private:
    struct Outstanding {
        uint64_t ticket_id;
        SimTime completion;
        uint32_t tasklet;
    };

    static constexpr size_t idx(DmaDirection d) { return d == DmaDirection::Preload ? 0 : 1; }
    void validate_size(uint32_t bytes) const;
    SimTime align_up(SimTime t) const;
    EnqueueResult enqueue(DmaDirection dir, uint64_t main_addr, uint32_t pad_offset,
                          uint32_t size_bytes, SimTime now);

    MainMemory& memory_;
    Scratchpad& pad_;
    PulEngineConfig config_;
    uint64_t cycle_ps_;
    uint32_t size_register_;
    uint64_t register_writes_ = 0;
    // Per direction, in completion order (requests of one engine complete FIFO).
    std::deque<Outstanding> fifo_[2];
    uint64_t enqueued_[2] = {0, 0};
    uint64_t bytes_[2] = {0, 0};
};

}  // namespace pulsim
