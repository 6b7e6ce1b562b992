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

#include "pulsim/config.hpp"

namespace pulsim {

namespace {

// Calibration knobs live in the YAML so a CSV row can always be traced back
// to the exact per-element cost and device timing that produced it.

const char* kExp1 = R"(name: exp1_roofline
description: >-
  Experiment 1: roofline of random 64 B preloads over operational
  intensity, phased vs. batch preloading, DRAM vs. NVM, NDP and PIM.
base:
  pe: ndp
  kernel: {kind: sum, elements: 4096, transfer_size: 64, distance: 64}
sweep:
  intensity: [1, 2, 4, 8, 16, 23, 32, 64, 128]
  strategy: [phased, batch]
groups:
  - name: ndp_1pe
    sweep:
      device: [dram, nvm]
  - name: ndp_14pe
    pe_count: 14
    kernel: {elements: 1024}
    sweep:
      device: [dram, nvm]
  - name: pim
    pe: {kind: pim}
    device: dram
    channel: upmem_mram
    kernel: {elements: 2048}
    sweep:
      strategy: [batch]
      tasklets: [1, 11]
)";

const char* kExp2 = R"(name: exp2_aggregate
description: >-
  Experiment 2: aggregating 1..8 row-wise attributes per 64 B row on
  PIM keeps execution time flat while IPC rises; NDP wait time vs. the compute
  cost of common DB operators.
groups:
  - name: pim_attributes
    pe: {kind: pim, tasklets: 16}
    device: dram
    channel: upmem_mram
    kernel: {kind: aggregate_n, elements: 4096, transfer_size: 64, per_attribute_instr: 4}
    sweep:
      attribute_count: [1, 2, 3, 4, 5, 6, 7, 8]
  - name: ndp_db_ops
    pe: ndp
    device: nvm
    kernel: {kind: sum, elements: 4096, transfer_size: 64, strategy: phased}
    sweep:
      intensity: [2, 4, 8, 24, 40]
)";

const char* kExp3 = R"(name: exp3_distance
description: >-
  Experiment 3: preload distance sweep for sequential and batch
  interleaving of a random-trace SUM on NDP with NVM.
base:
  pe: ndp
  kernel: {kind: sum, elements: 4096, transfer_size: 64, intensity: 4}
sweep:
  distance: [1, 2, 4, 8, 16, 32, 64]
  strategy: [sequential, batch]
groups:
  - name: nvm
    device: nvm
  # Device latency chosen so the closed-form saturation distance is 16.
  - name: nvm_d16
    device: {profile: nvm, label: nvm_d16, read_latency_ns: 900}
)";

const char* kExp4 = R"(name: exp4_transfer_size
description: >-
  Experiment 4: transfer size sweep on NDP with NVM, single PE and
  multiple PEs with and without preloading, plus PIM transfer sizes.
base:
  device: nvm
  kernel: {kind: sum, elements: 2048, intensity: 4, distance: 8}
groups:
  # Double-buffered batches of 16 fit the 64 KiB pad up to 2 KiB transfers.
  - name: ndp_1pe
    kernel: {distance: 16}
    sweep:
      transfer_size: [64, 128, 256, 512, 1024, 2048]
      strategy: [phased, batch]
  - name: ndp_1pe_4k
    sweep:
      transfer_size: [4096]
      strategy: [phased, batch]
  - name: ndp_multi_pe
    kernel: {elements: 1024}
    sweep:
      pe_count: [1, 2, 4, 8, 14]
      transfer_size: [64, 512, 4096]
      strategy: [phased, batch]
  - name: pim
    pe: {kind: pim, tasklets: 16}
    device: dram
    channel: upmem_calibrated
    kernel: {elements: 2048}
    sweep:
      transfer_size: [32, 64, 128, 256, 512, 1024, 2048]
)";

const char* kExp5 = R"(name: exp5_unload
description: >-
  Experiment 5: unloading. PIM filter with full vs. bit-vector
  materialization over selectivity, and NDP threshold flushing with PUL vs.
  64 B memcpy.
groups:
  - name: pim_filter
    pe: {kind: pim, tasklets: 16}
    device: dram
    channel: upmem_mram
    kernel: {kind: filter, elements: 4096, transfer_size: 64}
    sweep:
      materialization: [full, bitvector]
      selectivity: [0, 0.25, 0.5, 0.75, 1]
  - name: ndp_flush
    pe: ndp
    device: nvm
    kernel: {kind: flush, elements: 8192}
    sweep:
      flush_method: [pul, memcpy]
      flush_threshold: [64, 128, 256, 512, 1024, 2048, 4096]
)";

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = [] {
        std::vector<Preset> v;
        for (const char* yaml : {kExp1, kExp2, kExp3, kExp4, kExp5}) {
            const Experiment ex = load_experiment(yaml, "<preset>");
            v.push_back({ex.name, ex.description, yaml});
        }
        return v;
    }();
    return all;
}

const Preset* find_preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name) return &p;
    return nullptr;
}

}  // namespace pulsim
