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
#include <optional>
#include <ostream>

#include "pulsim/analysis.hpp"
#include "pulsim/memory.hpp"
#include "pulsim/pe.hpp"
#include "pulsim/pul_engine.hpp"
#include "pulsim/workloads.hpp"

namespace pulsim {

/// Everything needed to instantiate one simulation.
struct SystemConfig {
    PeProfile pe = PeProfile::ndp();
    uint32_t pe_count = 1;
    DeviceProfile device = DeviceProfile::nvm();
    ChannelProfile channel = ChannelProfile::system();
    PulEngineConfig engine;
    uint32_t pad_capacity = Scratchpad::kDefaultCapacity;
    KernelSpec kernel;
    uint64_t seed = 1;
    uint64_t trace_region = uint64_t{1} << 26;  ///< per PE
    bool value_check = false;
    uint64_t event_limit = 1'000'000'000;

    WorkloadLayout layout(uint32_t pe) const;
    void validate() const;
};

MetricsReport run_system(const SystemConfig& config, std::ostream* trace = nullptr);

/// Arithmetic SUM over every trace-addressed word of every PE.
uint64_t expected_sum(const SystemConfig& config);

/// Closed-form d* for the config's kernel, device and PE.
uint64_t saturation_distance(const SystemConfig& config);

/// Smallest PE count whose throughput reaches `threshold` of the channel
/// bandwidth. With PUL the kernel runs as configured; without it every
/// element is fetched phased. Throws NotSaturable past `max_pes`.
uint32_t pes_to_saturation(const SystemConfig& config, bool with_pul, uint32_t max_pes = 64,
                           double threshold = 0.95);

}  // namespace pulsim
