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
#include <string_view>
#include <vector>

#include "pulsim/pe.hpp"
#include "pulsim/program.hpp"

namespace pulsim {

struct TraceSpec {
    uint64_t element_count = 0;
    uint64_t region_bytes = uint64_t{1} << 26;
    uint64_t seed = 1;
    uint32_t alignment = 64;  ///< the transfer size
};

/// Uniform random, `alignment`-aligned offsets in [0, region_bytes).
std::vector<uint64_t> generate_trace(const TraceSpec& spec);

enum class KernelKind : uint8_t { Sum, AggregateN, Filter, Flush, MemcpyBaseline };
enum class Strategy : uint8_t { Phased, Sequential, Batch };
enum class Materialization : uint8_t { Full, Bitvector };
enum class FlushMethod : uint8_t { Pul, Memcpy };

std::string_view to_string(KernelKind k);
std::string_view to_string(Strategy s);
std::string_view to_string(Materialization m);
std::string_view to_string(FlushMethod m);
KernelKind parse_kernel_kind(std::string_view s);
Strategy parse_strategy(std::string_view s);
Materialization parse_materialization(std::string_view s);
FlushMethod parse_flush_method(std::string_view s);

struct KernelSpec {
    KernelKind kind = KernelKind::Sum;
    uint64_t elements = 1024;                ///< per PE
    uint32_t intensity_instr_per_elem = 4;   ///< c: per-element compute
    uint32_t addr_gen_instr = 1;             ///< trace lookup before each preload
    Strategy strategy = Strategy::Batch;
    uint32_t distance = 64;
    uint32_t transfer_size = 64;
    bool writeback = false;                  ///< batch: unload each consumed batch
    // aggregate_n
    uint32_t attribute_count = 1;
    uint32_t per_attribute_instr = 4;
    // filter
    double selectivity = 0.0;
    Materialization materialization = Materialization::Full;
    uint32_t compare_instr = 2;
    uint32_t bitvector_instr = 3;
    // flush / memcpy_baseline
    uint32_t flush_threshold = 2048;
    FlushMethod flush_method = FlushMethod::Pul;
    uint32_t update_instr = 4;

    void validate() const;
    /// Compute instructions spent on one element.
    uint64_t compute_per_element() const;
};

/// Named per-record compute costs for database operators. The numbers are
/// placeholders to position operators on the interleaving axis.
struct DbOpProfile {
    std::string name;
    uint32_t instr_per_record = 0;
};

const std::vector<DbOpProfile>& db_op_catalog();
const DbOpProfile& db_op(std::string_view name);

/// Where a PE's data lives in main memory.
struct WorkloadLayout {
    uint64_t input_base = 0;
    uint64_t input_bytes = uint64_t{1} << 26;
    uint64_t output_base = uint64_t{1} << 26;
    uint64_t seed = 1;
};

/// Pad bytes the kernel's buffers need for the given spec.
uint64_t pad_footprint(const KernelSpec& spec, uint32_t tasklets);

// Builders. Each returns one program per tasklet; PIM tasklets block on
// their own DMA calls, so PIM programs carry no waits.
std::vector<Program> build_sum_kernel(const KernelSpec& spec, const WorkloadLayout& layout,
                                      const PeProfile& pe, uint32_t pad_capacity);
std::vector<Program> build_aggregate_n_kernel(const KernelSpec& spec, const WorkloadLayout& layout,
                                              const PeProfile& pe, uint32_t pad_capacity);
std::vector<Program> build_filter_kernel(const KernelSpec& spec, const WorkloadLayout& layout,
                                         const PeProfile& pe, uint32_t pad_capacity);
std::vector<Program> build_flush_kernel(const KernelSpec& spec, const WorkloadLayout& layout,
                                        const PeProfile& pe, uint32_t pad_capacity);
/// Dispatches on `spec.kind`.
std::vector<Program> build_kernel(const KernelSpec& spec, const WorkloadLayout& layout,
                                  const PeProfile& pe, uint32_t pad_capacity);

/// Whether record `index` passes a filter of selectivity `s`.
bool filter_passes(uint64_t seed, uint64_t index, double s);

}  // namespace pulsim
