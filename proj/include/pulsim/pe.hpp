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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pulsim/memory.hpp"
#include "pulsim/program.hpp"
#include "pulsim/pul_engine.hpp"
#include "pulsim/scratchpad.hpp"
#include "pulsim/sim.hpp"

namespace pulsim {

enum class PeKind : uint8_t { Ndp, Pim };

constexpr std::string_view to_string(PeKind k) { return k == PeKind::Ndp ? "ndp" : "pim"; }

/// NDP: FPGA soft core, one hardware thread, DMA calls return immediately.
/// PIM: DPU with a revolving pipeline; a tasklet may issue once every
/// `pipeline_depth` cycles and blocks on its own DMA calls.
struct PeProfile {
    PeKind kind = PeKind::Ndp;
    uint32_t freq_mhz = 150;
    uint32_t pipeline_depth = 1;
    uint32_t max_tasklets = 1;
    uint32_t tasklets = 1;

    static PeProfile ndp() { return {PeKind::Ndp, 150, 1, 1, 1}; }
    static PeProfile pim(uint32_t tasklets = 11) { return {PeKind::Pim, 350, 11, 24, tasklets}; }

    bool blocking_dma() const { return kind == PeKind::Pim; }
    uint64_t cycle_ps() const { return cycle_period_ps(freq_mhz); }
    void validate() const;
};

struct TaskletStats {
    uint64_t instructions = 0;
    uint64_t issue_slots = 0;
    uint64_t finish_cycle = 0;
};

/// Cycle accounting of one PE. Every cycle lands in exactly one bucket:
/// compute (a kernel instruction issued), issue (DMA register write or
/// status poll issued), stall (every live tasklet waits on memory), idle
/// (a tasklet could run but the pipeline forbids it, or the pipeline drains).
struct PeStats {
    uint64_t total_cycles = 0;
    uint64_t compute_cycles = 0;
    uint64_t stall_cycles = 0;
    uint64_t issue_cycles = 0;
    uint64_t idle_cycles = 0;
    uint64_t instructions_retired = 0;
    uint64_t value_sum = 0;
    SimTime finish_time;
    std::vector<TaskletStats> per_tasklet;

    double ipc() const {
        return total_cycles ? static_cast<double>(instructions_retired) / total_cycles : 0.0;
    }
    double utilization() const {
        return total_cycles ? static_cast<double>(compute_cycles) / total_cycles : 0.0;
    }
};

/// Cycles `instructions` take on one tasklet running alone, pipeline drain included.
uint64_t exec_compute(const PeProfile& profile, uint64_t instructions, uint32_t tasklet_id);

/// Cycles for several tasklets issuing pure compute concurrently under the
/// round-robin scheduler.
uint64_t exec_compute_concurrent(const PeProfile& profile, std::span<const uint64_t> per_tasklet);

/// One processing element with its scratchpad and DMA engine, driven by the
/// event engine. The PE advances its own cycle counter locally and only
/// yields to the event queue when it must hand a request to the shared
/// memory channel, so channel arbitration follows global time order.
class ProcessingElement {
public:
    ProcessingElement(uint32_t id, PeProfile profile, PulEngineConfig engine_config,
                      uint32_t pad_capacity, bool keep_values, MainMemory& memory);
    ProcessingElement(const ProcessingElement&) = delete;
    ProcessingElement& operator=(const ProcessingElement&) = delete;

    /// One program per tasklet.
    void load(std::vector<Program> programs);
    /// Registers with the simulator and schedules the start at t = 0.
    void attach(Simulator& sim);

    bool finished() const { return finished_; }
    const PeStats& stats() const { return stats_; }
    const PeProfile& profile() const { return profile_; }
    uint32_t id() const { return id_; }
    PulEngine& engine() { return *engine_; }
    const PulEngine& engine() const { return *engine_; }
    Scratchpad& pad() { return *pad_; }

private:
    struct Knowledge {
        uint64_t issued_at_poll = 0;
        uint32_t pending_at_poll = 0;
    };

    struct Tasklet {
        Program program;
        size_t pc = 0;
        uint64_t progress = 0;          ///< instructions of the current action already issued
        uint64_t next_issue = 0;        ///< pipeline: earliest cycle of the next issue
        uint64_t blocked_until = 0;     ///< memory: earliest cycle the tasklet may act
        bool submit_pending = false;
        uint64_t submit_cycle = 0;
        uint64_t retire_ticket = 0;     ///< blocking DMA to acknowledge on resume
        uint64_t issued[2] = {0, 0};
        Knowledge known[2];
        TaskletStats stats;

        bool done() const { return pc >= program.size() && !submit_pending; }
    };

    uint64_t time_ps(uint64_t cycle) const { return cycle * cycle_ps_; }
    uint64_t wake_cycle(const Tasklet& t) const;
    bool eligible(const Tasklet& t) const;
    uint32_t scope(uint32_t tasklet) const;
    void on_event(Simulator& sim);
    void step(Tasklet& t, uint32_t index);
    void issue_burst(Tasklet& t, uint32_t index, uint64_t remaining, bool compute);
    void submit(Tasklet& t, uint32_t index);
    void apply_access(const PadAccess& access, uint64_t cycle);
    bool known_satisfied(const Tasklet& t, WaitKind kind, uint32_t at_most) const;
    void record_poll(Tasklet& t, uint32_t index, uint64_t sample_cycle);
    void finish();

    uint32_t id_;
    PeProfile profile_;
    uint64_t cycle_ps_;
    MainMemory& memory_;
    std::unique_ptr<Scratchpad> pad_;
    std::unique_ptr<PulEngine> engine_;
    std::vector<Tasklet> tasklets_;
    uint64_t cycle_ = 0;
    uint32_t rr_next_ = 0;
    bool finished_ = false;
    Simulator* sim_ = nullptr;
    HandlerId handler_ = 0;
    PeStats stats_;
};

}  // namespace pulsim
