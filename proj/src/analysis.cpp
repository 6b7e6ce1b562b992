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

#include "pulsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pulsim/error.hpp"

namespace pulsim {

double MetricsReport::intensity() const {
    if (bytes_preloaded == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(instructions) / static_cast<double>(bytes_preloaded);
}

double MetricsReport::attained_instr_per_sec() const {
    if (exec_time_ps == 0) return 0.0;
    return static_cast<double>(instructions) / (static_cast<double>(exec_time_ps) * 1e-12);
}

RooflinePoint MetricsReport::roofline() const {
    RooflinePoint p = roofline_attainable(intensity(), peak_instr_per_sec(),
                                          static_cast<double>(channel_bandwidth));
    p.attained_instr_per_sec = attained_instr_per_sec();
    return p;
}

RooflinePoint roofline_attainable(double intensity, double peak_instr_per_sec,
                                  double bandwidth_bytes_per_sec) {
    RooflinePoint p;
    p.intensity_instr_per_byte = intensity;
    const double memory_roof =
        std::isinf(intensity) ? std::numeric_limits<double>::infinity()
                              : intensity * bandwidth_bytes_per_sec;
    if (peak_instr_per_sec <= memory_roof) {
        p.attained_instr_per_sec = peak_instr_per_sec;
        p.bound = Bound::Compute;
    } else {
        p.attained_instr_per_sec = memory_roof;
        p.bound = Bound::Bandwidth;
    }
    return p;
}

double speedup(const MetricsReport& baseline, const MetricsReport& variant) {
    if (baseline.instructions != variant.instructions ||
        baseline.bytes_preloaded != variant.bytes_preloaded ||
        baseline.bytes_unloaded != variant.bytes_unloaded) {
        throw Error(ErrorCode::WorkMismatch,
                    "baseline retired " + std::to_string(baseline.instructions) + " instr / " +
                        std::to_string(baseline.bytes_preloaded) + " B, variant " +
                        std::to_string(variant.instructions) + " instr / " +
                        std::to_string(variant.bytes_preloaded) + " B");
    }
    if (variant.exec_time_ps == 0) {
        return baseline.exec_time_ps == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(baseline.exec_time_ps) / static_cast<double>(variant.exec_time_ps);
}

uint64_t saturation_distance(double latency_cycles, double transfer_cycles, double element_cycles) {
    const double d = std::ceil((latency_cycles + transfer_cycles) / std::max(1.0, element_cycles));
    return std::max<uint64_t>(1, static_cast<uint64_t>(d));
}

uint64_t plateau_onset(const std::vector<std::pair<uint64_t, double>>& time_by_distance,
                       double tolerance) {
    if (time_by_distance.empty()) throw Error(ErrorCode::ConfigInvalid, "empty distance sweep");
    const double reference = time_by_distance.back().second;
    for (const auto& [d, t] : time_by_distance) {
        if (t <= reference * (1.0 + tolerance)) return d;
    }
    return time_by_distance.back().first;
}

uint64_t break_even_transfer_size(double element_cycles, uint64_t cycle_ps, uint64_t bandwidth) {
    const double seconds = element_cycles * static_cast<double>(cycle_ps) * 1e-12;
    const auto bytes = static_cast<uint64_t>(seconds * static_cast<double>(bandwidth));
    return bytes / 8 * 8;
}

}  // namespace pulsim
