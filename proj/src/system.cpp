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

#include "pulsim/system.hpp"

#include <algorithm>
#include <memory>
#include <string>

#include "pulsim/error.hpp"
#include "pulsim/sim.hpp"

namespace pulsim {

WorkloadLayout SystemConfig::layout(uint32_t pe) const {
    WorkloadLayout l;
    l.input_base = uint64_t{pe} * trace_region;
    l.input_bytes = trace_region;
    l.output_base = (uint64_t{pe_count} + pe) * trace_region;
    l.seed = seed * 0x9e3779b97f4a7c15ULL + pe;
    return l;
}

void SystemConfig::validate() const {
    pe.validate();
    if (pe_count == 0) throw Error(ErrorCode::ConfigInvalid, "pe_count must be >= 1");
    if (channel.bandwidth_bytes_per_sec == 0) {
        throw Error(ErrorCode::ConfigInvalid, "channel bandwidth must be > 0");
    }
    if (engine.fifo_depth == 0) throw Error(ErrorCode::ConfigInvalid, "fifo_depth must be >= 1");
    kernel.validate();
}

MetricsReport run_system(const SystemConfig& config, std::ostream* trace) {
    config.validate();
    MainMemory memory(config.device, config.channel, 2 * uint64_t{config.pe_count} * config.trace_region);
    Simulator sim;
    sim.set_event_limit(config.event_limit);
    sim.set_kind_names({"pe_start", "dma_submit"});
    sim.set_trace(trace);

    std::vector<std::unique_ptr<ProcessingElement>> pes;
    for (uint32_t i = 0; i < config.pe_count; ++i) {
        auto pe = std::make_unique<ProcessingElement>(i, config.pe, config.engine, config.pad_capacity,
                                                      config.value_check, memory);
        pe->load(build_kernel(config.kernel, config.layout(i), config.pe, config.pad_capacity));
        pe->attach(sim);
        pes.push_back(std::move(pe));
    }
    sim.run_until_idle();

    MetricsReport r;
    r.pe_kind = std::string(to_string(config.pe.kind));
    r.device = config.device.label;
    r.channel = config.channel.label;
    r.pe_count = config.pe_count;
    r.tasklets = config.pe.tasklets;
    r.freq_mhz = config.pe.freq_mhz;
    r.kernel = config.kernel;
    r.seed = config.seed;
    r.channel_bandwidth = config.channel.bandwidth_bytes_per_sec;

    uint64_t end_ps = memory.last_completion().ps();
    for (const auto& pe : pes) {
        if (!pe->finished()) throw std::logic_error("PE " + std::to_string(pe->id()) + " did not finish");
        const PeStats& s = pe->stats();
        end_ps = std::max(end_ps, s.finish_time.ps());
        r.instructions += s.instructions_retired;
        r.total_cycles += s.total_cycles;
        r.stall_breakdown.compute_cycles += s.compute_cycles;
        r.stall_breakdown.issue_cycles += s.issue_cycles;
        r.stall_breakdown.stall_cycles += s.stall_cycles;
        r.stall_breakdown.idle_cycles += s.idle_cycles;
        r.value_sum += s.value_sum;
        const PulEngine& e = pe->engine();
        r.bytes_preloaded += e.bytes(DmaDirection::Preload);
        r.bytes_unloaded += e.bytes(DmaDirection::Unload);
        r.preload_requests += e.enqueued(DmaDirection::Preload);
        r.unload_requests += e.enqueued(DmaDirection::Unload);
        r.size_register_writes += e.size_register_writes();
        r.per_pe.push_back(s);
    }
    r.exec_time_ps = end_ps;
    if (r.total_cycles) {
        r.ipc = static_cast<double>(r.instructions) / static_cast<double>(r.total_cycles);
        r.pe_utilization =
            static_cast<double>(r.stall_breakdown.compute_cycles) / static_cast<double>(r.total_cycles);
    }
    if (end_ps > 0) r.throughput_bytes_per_sec = memory.observed_throughput(SimTime{}, SimTime::from_ps(end_ps));
    return r;
}

uint64_t expected_sum(const SystemConfig& config) {
    uint64_t sum = 0;
    for (uint32_t p = 0; p < config.pe_count; ++p) {
        const WorkloadLayout l = config.layout(p);
        const auto trace = generate_trace(
            {config.kernel.elements, l.input_bytes, l.seed, config.kernel.transfer_size});
        for (uint64_t a : trace) sum += MainMemory::initial_word(l.input_base + a);
    }
    return sum;
}

uint64_t saturation_distance(const SystemConfig& config) {
    const double cycle = static_cast<double>(config.pe.cycle_ps());
    MainMemory probe(config.device, config.channel, 1);
    const double latency = static_cast<double>(probe.latency_ps(DmaDirection::Preload)) / cycle;
    const double transfer =
        static_cast<double>(probe.transfer_time_ps(config.kernel.transfer_size)) / cycle;
    const double element = static_cast<double>(config.kernel.addr_gen_instr +
                                               config.engine.issue_overhead_preload +
                                               config.kernel.compute_per_element());
    return saturation_distance(latency, transfer, element);
}

uint32_t pes_to_saturation(const SystemConfig& config, bool with_pul, uint32_t max_pes,
                           double threshold) {
    SystemConfig c = config;
    if (!with_pul) c.kernel.strategy = Strategy::Phased;
    const double target = threshold * static_cast<double>(config.channel.bandwidth_bytes_per_sec);
    for (uint32_t n = 1; n <= max_pes; ++n) {
        c.pe_count = n;
        if (run_system(c).throughput_bytes_per_sec >= target) return n;
    }
    throw Error(ErrorCode::NotSaturable, "channel below " + std::to_string(threshold * 100) +
                                             "% of bandwidth with " + std::to_string(max_pes) +
                                             " PEs");
}

}  // namespace pulsim
