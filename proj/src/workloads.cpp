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

#include "pulsim/workloads.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <string>

#include "pulsim/error.hpp"

namespace pulsim {

namespace {

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <typename E>
struct Names {
    E value;
    std::string_view name;
};

constexpr Names<KernelKind> kKinds[] = {{KernelKind::Sum, "sum"},
                                       {KernelKind::AggregateN, "aggregate_n"},
                                       {KernelKind::Filter, "filter"},
                                       {KernelKind::Flush, "flush"},
                                       {KernelKind::MemcpyBaseline, "memcpy_baseline"}};
constexpr Names<Strategy> kStrategies[] = {
    {Strategy::Phased, "phased"}, {Strategy::Sequential, "sequential"}, {Strategy::Batch, "batch"}};
constexpr Names<Materialization> kMaterializations[] = {{Materialization::Full, "full"},
                                                       {Materialization::Bitvector, "bitvector"}};
constexpr Names<FlushMethod> kFlushMethods[] = {{FlushMethod::Pul, "pul"},
                                               {FlushMethod::Memcpy, "memcpy"}};

template <typename E, size_t N>
std::string_view name_of(const Names<E> (&table)[N], E v) {
    for (const auto& e : table)
        if (e.value == v) return e.name;
    return "?";
}

template <typename E, size_t N>
E parse(const Names<E> (&table)[N], std::string_view s, const char* what) {
    for (const auto& e : table)
        if (e.name == s) return e.value;
    std::string options;
    for (const auto& e : table) options += (options.empty() ? "" : "|") + std::string(e.name);
    throw Error(ErrorCode::ConfigInvalid,
                "unknown " + std::string(what) + " '" + std::string(s) + "' (" + options + ")");
}

constexpr uint32_t kBitvectorBlock = 64;
constexpr uint64_t kRecordsPerBlock = kBitvectorBlock * 8;

void check_fits(const KernelSpec& spec, uint32_t tasklets, uint32_t pad_capacity) {
    const uint64_t need = pad_footprint(spec, tasklets);
    if (need > pad_capacity) {
        throw Error(ErrorCode::ScratchpadOverflow,
                    std::string(to_string(spec.kind)) + " needs " + std::to_string(need) +
                        " B of scratchpad, " + std::to_string(pad_capacity) + " B available");
    }
}

std::vector<uint64_t> pe_trace(const KernelSpec& spec, const WorkloadLayout& layout) {
    auto trace = generate_trace({spec.elements, layout.input_bytes, layout.seed, spec.transfer_size});
    for (auto& a : trace) a += layout.input_base;
    return trace;
}

// Elements i with i % tasklets == t.
std::vector<uint64_t> share(uint64_t n, uint32_t tasklets, uint32_t t) {
    std::vector<uint64_t> out;
    for (uint64_t i = t; i < n; i += tasklets) out.push_back(i);
    return out;
}

// Strategy-driven row streaming on a non-blocking PE: every element is one
// preload of `ts` bytes followed by `compute` instructions reading `read_len`
// bytes of it.
Program stream_rows(const KernelSpec& spec, const std::vector<uint64_t>& trace, uint64_t output_base,
                    uint64_t compute, uint32_t read_len) {
    const uint32_t ts = spec.transfer_size;
    const uint64_t n = trace.size();
    const uint64_t a = spec.addr_gen_instr;
    Program p;
    p.push_back(op::SetTransferSize{ts});
    auto issue = [&](uint64_t i, uint32_t slot) {
        if (a) p.push_back(op::Compute{a, {}});
        p.push_back(op::Preload{trace[i], slot * ts});
    };
    auto consume = [&](uint32_t slot) {
        p.push_back(op::Compute{compute, {PadAccess::Kind::Read, slot * ts, read_len, 0}});
    };

    switch (spec.strategy) {
        case Strategy::Phased:
            for (uint64_t i = 0; i < n; ++i) {
                issue(i, 0);
                p.push_back(op::Wait{WaitKind::Preloads, 0, false});
                consume(0);
            }
            break;
        case Strategy::Sequential: {
            const uint64_t d = spec.distance;
            const uint64_t ring = d + 1;
            for (uint64_t j = 0; j < std::min(d, n); ++j) issue(j, static_cast<uint32_t>(j % ring));
            for (uint64_t i = 0; i < n; ++i) {
                if (i + d < n) issue(i + d, static_cast<uint32_t>((i + d) % ring));
                const auto ahead = static_cast<uint32_t>(std::min(n, i + d + 1) - (i + 1));
                p.push_back(op::Wait{WaitKind::Preloads, ahead, true});
                consume(static_cast<uint32_t>(i % ring));
            }
            break;
        }
        case Strategy::Batch: {
            const uint64_t d = spec.distance;
            const uint64_t batches = (n + d - 1) / d;
            auto batch_begin = [&](uint64_t k) { return k * d; };
            auto batch_end = [&](uint64_t k) { return std::min(n, (k + 1) * d); };
            auto slot = [&](uint64_t i) { return static_cast<uint32_t>(((i / d) % 2) * d + i % d); };
            for (uint64_t i = batch_begin(0); i < batch_end(0); ++i) issue(i, slot(i));
            for (uint64_t k = 0; k < batches; ++k) {
                uint32_t next = 0;
                if (k + 1 < batches) {
                    // The half about to be refilled may still be draining to memory.
                    if (spec.writeback && k >= 1) p.push_back(op::Wait{WaitKind::Unloads, 0, true});
                    for (uint64_t i = batch_begin(k + 1); i < batch_end(k + 1); ++i) issue(i, slot(i));
                    next = static_cast<uint32_t>(batch_end(k + 1) - batch_begin(k + 1));
                }
                p.push_back(op::Wait{WaitKind::Preloads, next, true});
                for (uint64_t i = batch_begin(k); i < batch_end(k); ++i) consume(slot(i));
                if (spec.writeback) {
                    const auto bytes = static_cast<uint32_t>((batch_end(k) - batch_begin(k)) * ts);
                    p.push_back(op::Unload{slot(batch_begin(k)) * ts, output_base + batch_begin(k) * ts, bytes});
                }
            }
            if (spec.writeback) p.push_back(op::Wait{WaitKind::Unloads, 0, false});
            break;
        }
    }
    return p;
}

// Blocking row streaming: one buffer per tasklet, DMA calls stall the caller.
Program blocking_rows(const KernelSpec& spec, const std::vector<uint64_t>& trace,
                      const std::vector<uint64_t>& rows, uint32_t tasklet, uint64_t compute,
                      uint32_t read_len) {
    const uint32_t ts = spec.transfer_size;
    const uint32_t slot = tasklet * ts;
    Program p;
    p.push_back(op::SetTransferSize{ts});
    for (uint64_t i : rows) {
        if (spec.addr_gen_instr) p.push_back(op::Compute{spec.addr_gen_instr, {}});
        p.push_back(op::Preload{trace[i], slot});
        p.push_back(op::Compute{compute, {PadAccess::Kind::Read, slot, read_len, 0}});
    }
    return p;
}

std::vector<Program> rows_kernel(const KernelSpec& spec, const WorkloadLayout& layout,
                                 const PeProfile& pe, uint32_t pad_capacity, uint64_t compute,
                                 uint32_t read_len) {
    spec.validate();
    const uint32_t tasklets = pe.blocking_dma() ? pe.tasklets : 1;
    check_fits(spec, tasklets, pad_capacity);
    const auto trace = pe_trace(spec, layout);
    std::vector<Program> out;
    if (!pe.blocking_dma()) {
        out.push_back(stream_rows(spec, trace, layout.output_base, compute, read_len));
        return out;
    }
    for (uint32_t t = 0; t < tasklets; ++t) {
        out.push_back(blocking_rows(spec, trace, share(trace.size(), tasklets, t), t, compute,
                                    read_len));
    }
    return out;
}

}  // namespace

std::vector<uint64_t> generate_trace(const TraceSpec& spec) {
    if (spec.alignment == 0 || !std::has_single_bit(spec.alignment)) {
        throw Error(ErrorCode::InvalidRegion,
                    "alignment " + std::to_string(spec.alignment) + " is not a power of two");
    }
    if (spec.region_bytes < spec.alignment) {
        throw Error(ErrorCode::InvalidRegion, "region of " + std::to_string(spec.region_bytes) +
                                                  " B is smaller than one " +
                                                  std::to_string(spec.alignment) + " B slot");
    }
    const uint64_t slots = spec.region_bytes / spec.alignment;
    std::mt19937_64 rng(spec.seed);
    std::vector<uint64_t> out(spec.element_count);
    for (auto& a : out) {
        // Multiply-shift keeps the slot choice unbiased enough and portable.
        const auto wide = static_cast<unsigned __int128>(rng()) * slots;
        a = static_cast<uint64_t>(wide >> 64) * spec.alignment;
    }
    return out;
}

std::string_view to_string(KernelKind k) { return name_of(kKinds, k); }
std::string_view to_string(Strategy s) { return name_of(kStrategies, s); }
std::string_view to_string(Materialization m) { return name_of(kMaterializations, m); }
std::string_view to_string(FlushMethod m) { return name_of(kFlushMethods, m); }
KernelKind parse_kernel_kind(std::string_view s) { return parse(kKinds, s, "kernel"); }
Strategy parse_strategy(std::string_view s) { return parse(kStrategies, s, "strategy"); }
Materialization parse_materialization(std::string_view s) {
    return parse(kMaterializations, s, "materialization");
}
FlushMethod parse_flush_method(std::string_view s) { return parse(kFlushMethods, s, "flush method"); }

void KernelSpec::validate() const {
    auto bad = [](ErrorCode code, const std::string& msg) { throw Error(code, msg); };
    if (transfer_size < 8 || transfer_size % 8 != 0) {
        bad(ErrorCode::InvalidTransferSize,
            "transfer_size " + std::to_string(transfer_size) + " must be a multiple of 8");
    }
    if (strategy != Strategy::Phased && distance == 0) {
        bad(ErrorCode::ConfigInvalid, "distance must be >= 1 for sequential and batch");
    }
    if (!(selectivity >= 0.0 && selectivity <= 1.0)) {
        bad(ErrorCode::ConfigInvalid, "selectivity must lie in [0, 1]");
    }
    if (kind == KernelKind::AggregateN) {
        if (attribute_count == 0) bad(ErrorCode::ConfigInvalid, "attribute_count must be >= 1");
        if (uint64_t{attribute_count} * 8 > transfer_size) {
            bad(ErrorCode::RowTooLarge, std::to_string(attribute_count) + " attributes need " +
                                            std::to_string(attribute_count * 8) + " B, rows are " +
                                            std::to_string(transfer_size) + " B");
        }
    }
    if (kind == KernelKind::Flush || kind == KernelKind::MemcpyBaseline) {
        if (flush_threshold < 8 || flush_threshold % 8 != 0) {
            bad(ErrorCode::InvalidTransferSize,
                "flush_threshold " + std::to_string(flush_threshold) + " must be a multiple of 8");
        }
    }
}

uint64_t KernelSpec::compute_per_element() const {
    switch (kind) {
        case KernelKind::Sum: return intensity_instr_per_elem;
        case KernelKind::AggregateN: return uint64_t{attribute_count} * per_attribute_instr;
        case KernelKind::Filter:
            return compare_instr + (materialization == Materialization::Bitvector ? bitvector_instr : 0);
        case KernelKind::Flush:
        case KernelKind::MemcpyBaseline: return update_instr;
    }
    return 0;
}

const std::vector<DbOpProfile>& db_op_catalog() {
    static const std::vector<DbOpProfile> catalog = {
        {"sum", 4},
        {"aggregation", 8},
        {"selection", 2},
        {"mvcc_visibility_check", 24},
        {"hash_probe", 40},
    };
    return catalog;
}

const DbOpProfile& db_op(std::string_view name) {
    for (const auto& p : db_op_catalog())
        if (p.name == name) return p;
    throw Error(ErrorCode::ConfigInvalid, "unknown db_op '" + std::string(name) + "'");
}

bool filter_passes(uint64_t seed, uint64_t index, double s) {
    const uint64_t h = mix64(seed * 0x100000001b3ULL ^ mix64(index));
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    return u < s;
}

uint64_t pad_footprint(const KernelSpec& spec, uint32_t tasklets) {
    const uint64_t ts = spec.transfer_size;
    switch (spec.kind) {
        case KernelKind::Sum:
        case KernelKind::AggregateN:
            if (tasklets > 1) return tasklets * ts;
            switch (spec.strategy) {
                case Strategy::Phased: return ts;
                case Strategy::Sequential: return (uint64_t{spec.distance} + 1) * ts;
                case Strategy::Batch: return 2 * uint64_t{spec.distance} * ts;
            }
            return 0;
        case KernelKind::Filter:
            return tasklets * (ts + (spec.materialization == Materialization::Bitvector
                                         ? kBitvectorBlock
                                         : 0));
        case KernelKind::Flush:
        case KernelKind::MemcpyBaseline: {
            const bool pul = spec.kind == KernelKind::Flush && spec.flush_method == FlushMethod::Pul;
            return (pul ? 2 : 1) * uint64_t{spec.flush_threshold};
        }
    }
    return 0;
}

std::vector<Program> build_sum_kernel(const KernelSpec& spec, const WorkloadLayout& layout,
                                      const PeProfile& pe, uint32_t pad_capacity) {
    return rows_kernel(spec, layout, pe, pad_capacity, spec.intensity_instr_per_elem,
                       Scratchpad::kWordBytes);
}

std::vector<Program> build_aggregate_n_kernel(const KernelSpec& spec, const WorkloadLayout& layout,
                                              const PeProfile& pe, uint32_t pad_capacity) {
    spec.validate();
    return rows_kernel(spec, layout, pe, pad_capacity, spec.compute_per_element(),
                       spec.attribute_count * Scratchpad::kWordBytes);
}

std::vector<Program> build_filter_kernel(const KernelSpec& spec, const WorkloadLayout& layout,
                                         const PeProfile& pe, uint32_t pad_capacity) {
    spec.validate();
    const uint32_t tasklets = pe.blocking_dma() ? pe.tasklets : 1;
    check_fits(spec, tasklets, pad_capacity);
    const bool sync = !pe.blocking_dma();
    const bool bitvector = spec.materialization == Materialization::Bitvector;
    const uint32_t ts = spec.transfer_size;
    const auto trace = pe_trace(spec, layout);
    const uint64_t blocks_per_tasklet =
        (spec.elements / tasklets + 1 + kRecordsPerBlock - 1) / kRecordsPerBlock;

    std::vector<Program> out;
    for (uint32_t t = 0; t < tasklets; ++t) {
        const uint32_t slot = t * ts;
        const uint32_t bv = tasklets * ts + t * kBitvectorBlock;
        Program p;
        p.push_back(op::SetTransferSize{ts});
        uint64_t local = 0;
        uint64_t block = 0;
        auto flush_block = [&] {
            const uint64_t addr = layout.output_base +
                                  (t * blocks_per_tasklet + block) * kBitvectorBlock;
            p.push_back(op::Unload{bv, addr, kBitvectorBlock});
            if (sync) p.push_back(op::Wait{WaitKind::Unloads, 0, false});
            ++block;
        };
        for (uint64_t i : share(trace.size(), tasklets, t)) {
            if (bitvector && local % kRecordsPerBlock == 0) {
                p.push_back(op::Compute{kBitvectorBlock / Scratchpad::kWordBytes,
                                        {PadAccess::Kind::Write, bv, kBitvectorBlock, 0}});
            }
            if (spec.addr_gen_instr) p.push_back(op::Compute{spec.addr_gen_instr, {}});
            p.push_back(op::Preload{trace[i], slot});
            if (sync) p.push_back(op::Wait{WaitKind::Preloads, 0, false});
            const bool pass = filter_passes(layout.seed, i, spec.selectivity);
            p.push_back(op::Compute{spec.compare_instr, {PadAccess::Kind::Read, slot, 8, 0}});
            if (bitvector) {
                const uint64_t bit = local % kRecordsPerBlock;
                PadAccess set{PadAccess::Kind::SetBit,
                              static_cast<uint32_t>(bv + (bit / 64) * 8), 8, bit % 64};
                p.push_back(op::Compute{spec.bitvector_instr, pass ? set : PadAccess{}});
            } else if (pass) {
                p.push_back(op::Unload{slot, layout.output_base + i * ts, ts});
                if (sync) p.push_back(op::Wait{WaitKind::Unloads, 0, false});
            }
            ++local;
            if (bitvector && local % kRecordsPerBlock == 0) flush_block();
        }
        if (bitvector && local % kRecordsPerBlock != 0) flush_block();
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Program> build_flush_kernel(const KernelSpec& spec, const WorkloadLayout& layout,
                                        const PeProfile& pe, uint32_t pad_capacity) {
    spec.validate();
    const bool pul = spec.kind == KernelKind::Flush && spec.flush_method == FlushMethod::Pul;
    const uint32_t threshold = spec.flush_threshold;
    if (uint64_t{threshold} * 2 > pad_capacity) {
        throw Error(ErrorCode::ScratchpadOverflow,
                    "flush threshold " + std::to_string(threshold) +
                        " B exceeds half the scratchpad (" + std::to_string(pad_capacity) + " B)");
    }
    const bool sync = !pe.blocking_dma();
    Program p;
    uint32_t buf = 0;
    uint32_t pos = 0;
    uint64_t out_addr = layout.output_base;
    auto flush = [&](uint32_t bytes) {
        if (pul) {
            p.push_back(op::Unload{buf, out_addr, bytes});
            buf = buf == 0 ? threshold : 0;
            if (sync) p.push_back(op::Wait{WaitKind::Unloads, 1, true});
        } else {
            for (uint32_t off = 0; off < bytes; off += 64) {
                const uint32_t chunk = std::min<uint32_t>(64, bytes - off);
                p.push_back(op::Unload{buf + off, out_addr + off, chunk});
                if (sync) p.push_back(op::Wait{WaitKind::Unloads, 0, false});
            }
        }
        out_addr += bytes;
        pos = 0;
    };
    for (uint64_t i = 0; i < spec.elements; ++i) {
        p.push_back(op::Compute{spec.update_instr, {PadAccess::Kind::Write, buf + pos, 8, i + 1}});
        pos += 8;
        if (pos == threshold) flush(pos);
    }
    if (pos > 0) flush(pos);
    if (sync && pul) p.push_back(op::Wait{WaitKind::Unloads, 0, false});
    return {std::move(p)};
}

std::vector<Program> build_kernel(const KernelSpec& spec, const WorkloadLayout& layout,
                                  const PeProfile& pe, uint32_t pad_capacity) {
    switch (spec.kind) {
        case KernelKind::Sum: return build_sum_kernel(spec, layout, pe, pad_capacity);
        case KernelKind::AggregateN: return build_aggregate_n_kernel(spec, layout, pe, pad_capacity);
        case KernelKind::Filter: return build_filter_kernel(spec, layout, pe, pad_capacity);
        case KernelKind::Flush:
        case KernelKind::MemcpyBaseline: return build_flush_kernel(spec, layout, pe, pad_capacity);
    }
    throw Error(ErrorCode::InvalidKernel, "unhandled kernel kind");
}

}  // namespace pulsim
