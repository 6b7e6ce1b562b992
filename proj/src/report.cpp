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

#include "json.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "pulsim/config.hpp"

namespace pulsim {

namespace {

const char* kColumns[] = {
    "run", "group", "point", "profile", "device", "channel", "pe_count", "tasklets", "freq_mhz",
    "kernel", "strategy", "distance", "transfer_size_bytes", "elements", "intensity_instr_per_elem",
    "attribute_count", "selectivity", "materialization", "flush_threshold_bytes", "flush_method",
    "seed", "exec_time_ns", "total_cycles", "compute_cycles", "issue_cycles", "stall_cycles",
    "idle_cycles", "instructions_retired", "ipc", "pe_utilization", "bytes_preloaded",
    "bytes_unloaded", "preload_requests", "unload_requests", "size_register_writes",
    "throughput_bps", "intensity_instr_per_byte", "attained_instr_per_sec",
    "roofline_instr_per_sec", "bound", "value_sum"};

std::string num(double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

nlohmann::json finite(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

std::string csv_header() {
    std::string out;
    for (const char* c : kColumns) out += (out.empty() ? "" : ",") + std::string(c);
    return out + "\n";
}

std::string csv_row(size_t run, const RunPoint& point, const MetricsReport& r) {
    const KernelSpec& k = r.kernel;
    const RooflinePoint roof = r.roofline();
    const std::vector<std::string> cells = {
        std::to_string(run),
        point.group,
        point.label,
        r.pe_kind,
        r.device,
        r.channel,
        std::to_string(r.pe_count),
        std::to_string(r.tasklets),
        std::to_string(r.freq_mhz),
        std::string(to_string(k.kind)),
        std::string(to_string(k.strategy)),
        std::to_string(k.distance),
        std::to_string(k.transfer_size),
        std::to_string(k.elements),
        std::to_string(k.compute_per_element()),
        std::to_string(k.attribute_count),
        num(k.selectivity),
        std::string(to_string(k.materialization)),
        std::to_string(k.flush_threshold),
        std::string(to_string(k.flush_method)),
        std::to_string(r.seed),
        fixed3(r.exec_time_ns()),
        std::to_string(r.total_cycles),
        std::to_string(r.stall_breakdown.compute_cycles),
        std::to_string(r.stall_breakdown.issue_cycles),
        std::to_string(r.stall_breakdown.stall_cycles),
        std::to_string(r.stall_breakdown.idle_cycles),
        std::to_string(r.instructions),
        num(r.ipc),
        num(r.pe_utilization),
        std::to_string(r.bytes_preloaded),
        std::to_string(r.bytes_unloaded),
        std::to_string(r.preload_requests),
        std::to_string(r.unload_requests),
        std::to_string(r.size_register_writes),
        num(r.throughput_bytes_per_sec),
        num(r.intensity()),
        num(roof.attained_instr_per_sec),
        num(roofline_attainable(r.intensity(), r.peak_instr_per_sec(),
                                static_cast<double>(r.channel_bandwidth))
                .attained_instr_per_sec),
        std::string(to_string(roof.bound)),
        std::to_string(r.value_sum),
    };
    std::string out;
    for (const auto& c : cells) out += (out.empty() ? "" : ",") + c;
    return out + "\n";
}

std::string json_report(const Experiment& ex, const std::vector<MetricsReport>& reports) {
    nlohmann::ordered_json root;
    root["name"] = ex.name;
    root["description"] = ex.description;
    root["runs"] = nlohmann::ordered_json::array();
    for (size_t i = 0; i < reports.size(); ++i) {
        const MetricsReport& r = reports[i];
        const KernelSpec& k = r.kernel;
        const SystemConfig& c = ex.points[i].config;
        nlohmann::ordered_json run;
        run["run"] = i;
        run["group"] = ex.points[i].group;
        run["point"] = ex.points[i].label;
        run["config"] = {
            {"pe", {{"kind", r.pe_kind}, {"freq_mhz", c.pe.freq_mhz},
                    {"pipeline_depth", c.pe.pipeline_depth}, {"tasklets", c.pe.tasklets}}},
            {"pe_count", c.pe_count},
            {"device", {{"label", c.device.label}, {"read_latency_ns", c.device.read_latency_ns},
                        {"write_latency_ns", c.device.write_latency_ns}}},
            {"channel", {{"label", c.channel.label},
                         {"bandwidth_bytes_per_sec", c.channel.bandwidth_bytes_per_sec}}},
            {"engine", {{"fifo_depth", c.engine.fifo_depth},
                        {"issue_overhead_cycles_preload", c.engine.issue_overhead_preload},
                        {"issue_overhead_cycles_unload", c.engine.issue_overhead_unload}}},
            {"pad_capacity", c.pad_capacity},
            {"mode", c.value_check ? "value-check" : "timing"},
            {"seed", c.seed},
            {"kernel", {{"kind", to_string(k.kind)}, {"elements", k.elements},
                        {"intensity", k.intensity_instr_per_elem},
                        {"addr_gen_instr", k.addr_gen_instr}, {"strategy", to_string(k.strategy)},
                        {"distance", k.distance}, {"transfer_size", k.transfer_size},
                        {"attribute_count", k.attribute_count}, {"selectivity", k.selectivity},
                        {"materialization", to_string(k.materialization)},
                        {"flush_threshold", k.flush_threshold},
                        {"flush_method", to_string(k.flush_method)}}},
        };
        const RooflinePoint roof = r.roofline();
        run["metrics"] = {
            {"exec_time_ns", r.exec_time_ns()},
            {"bytes_preloaded", r.bytes_preloaded},
            {"bytes_unloaded", r.bytes_unloaded},
            {"throughput_bytes_per_sec", r.throughput_bytes_per_sec},
            {"ipc", r.ipc},
            {"pe_utilization", r.pe_utilization},
            {"instructions_retired", r.instructions},
            {"stall_breakdown", {{"compute_cycles", r.stall_breakdown.compute_cycles},
                                 {"issue_cycles", r.stall_breakdown.issue_cycles},
                                 {"stall_cycles", r.stall_breakdown.stall_cycles},
                                 {"idle_cycles", r.stall_breakdown.idle_cycles}}},
            {"intensity_instr_per_byte", finite(r.intensity())},
            {"attained_instr_per_sec", roof.attained_instr_per_sec},
            {"bound", to_string(roof.bound)},
            {"value_sum", r.value_sum},
        };
        auto pes = nlohmann::ordered_json::array();
        for (const PeStats& s : r.per_pe) {
            pes.push_back({{"total_cycles", s.total_cycles},
                           {"compute_cycles", s.compute_cycles},
                           {"issue_cycles", s.issue_cycles},
                           {"stall_cycles", s.stall_cycles},
                           {"idle_cycles", s.idle_cycles},
                           {"instructions_retired", s.instructions_retired},
                           {"ipc", s.ipc()},
                           {"finish_time_ns", s.finish_time.ns()}});
        }
        run["per_pe"] = std::move(pes);
        root["runs"].push_back(std::move(run));
    }
    return root.dump(2) + "\n";
}

std::vector<MetricsReport> run_experiment(const Experiment& ex, unsigned threads,
                                          const std::optional<std::string>& trace_dir) {
    const size_t n = ex.points.size();
    std::vector<MetricsReport> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < n; i = next++) {
            try {
                if (trace_dir) {
                    std::ofstream trace(*trace_dir + "/" + ex.name + "_run" + std::to_string(i) +
                                        ".trace.csv");
                    trace << "time_ns,seq,target,kind\n";
                    out[i] = run_system(ex.points[i].config, &trace);
                } else {
                    out[i] = run_system(ex.points[i].config);
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned t = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < t; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    // Report the first failure in config order so errors are deterministic too.
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace pulsim
