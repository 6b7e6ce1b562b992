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
#include <utility>
#include <vector>

#include "pulsim/pe.hpp"
#include "pulsim/workloads.hpp"

namespace pulsim {

enum class Bound : uint8_t { Compute, Bandwidth };

constexpr std::string_view to_string(Bound b) {
    return b == Bound::Compute ? "compute" : "bandwidth";
}

struct RooflinePoint {
    double intensity_instr_per_byte = 0.0;
    double attained_instr_per_sec = 0.0;
    Bound bound = Bound::Bandwidth;
};

struct StallBreakdown {
    uint64_t compute_cycles = 0;
    uint64_t issue_cycles = 0;
    uint64_t stall_cycles = 0;
    uint64_t idle_cycles = 0;
};

/// Figures of merit of one run. Cycle counts and instructions are summed
/// over PEs; IPC and utilization are ratios of those sums.
struct MetricsReport {
    // Config echo.
    std::string pe_kind;
    std::string device;
    std::string channel;
    uint32_t pe_count = 1;
    uint32_t tasklets = 1;
    uint32_t freq_mhz = 0;
    KernelSpec kernel;
    uint64_t seed = 0;

    uint64_t exec_time_ps = 0;
    uint64_t bytes_preloaded = 0;
    uint64_t bytes_unloaded = 0;
    uint64_t preload_requests = 0;
    uint64_t unload_requests = 0;
    uint64_t size_register_writes = 0;
    double throughput_bytes_per_sec = 0.0;
    uint64_t channel_bandwidth = 0;
    uint64_t instructions = 0;
    uint64_t total_cycles = 0;
    double ipc = 0.0;
    double pe_utilization = 0.0;
    StallBreakdown stall_breakdown;
    uint64_t value_sum = 0;
    std::vector<PeStats> per_pe;

    double exec_time_ns() const { return static_cast<double>(exec_time_ps) / 1e3; }
    double peak_instr_per_sec() const { return pe_count * freq_mhz * 1e6; }
    /// Instructions per preloaded byte; infinite for write-only kernels.
    double intensity() const;
    double attained_instr_per_sec() const;
    RooflinePoint roofline() const;
};

/// min(peak, intensity * bandwidth); ties count as compute-bound.
RooflinePoint roofline_attainable(double intensity, double peak_instr_per_sec,
                                  double bandwidth_bytes_per_sec);

/// baseline / variant execution time. Both must have done the same work.
double speedup(const MetricsReport& baseline, const MetricsReport& variant);

/// Closed-form preload distance beyond which the latency of one request is
/// covered by the issue and compute work of the elements ahead of it:
///   d* = ceil((latency_cycles + transfer_cycles) / max(1, element_cycles))
/// where element_cycles counts everything the PE issues per element.
uint64_t saturation_distance(double latency_cycles, double transfer_cycles, double element_cycles);

/// First distance whose time is within `tolerance` of the time at the
/// largest distance. Input must be sorted by distance.
uint64_t plateau_onset(const std::vector<std::pair<uint64_t, double>>& time_by_distance,
                       double tolerance = 0.01);

/// Largest transfer whose channel time still fits in `element_cycles` PE
/// cycles, rounded down to a whole word.
uint64_t break_even_transfer_size(double element_cycles, uint64_t cycle_ps, uint64_t bandwidth);

}  // namespace pulsim
