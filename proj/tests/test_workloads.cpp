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

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "pulsim/error.hpp"
#include "pulsim/workloads.hpp"

using namespace pulsim;

namespace {

template <typename F>
ErrorCode code_of(F f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::ConfigInvalid;
}

template <typename T>
size_t count(const Program& p) {
    size_t n = 0;
    for (const auto& a : p) n += std::holds_alternative<T>(a);
    return n;
}

uint64_t instructions(const std::vector<Program>& ps) {
    uint64_t n = 0;
    for (const auto& p : ps)
        for (const auto& a : p)
            if (const auto* c = std::get_if<op::Compute>(&a)) n += c->instructions;
    return n;
}

constexpr uint32_t kPad = 64 * 1024;

}  // namespace

TEST(Trace, DeterministicAlignedAndInRange) {
    const TraceSpec spec{1000, 1 << 20, 42, 256};
    const auto a = generate_trace(spec);
    EXPECT_EQ(a, generate_trace(spec));
    EXPECT_NE(a, generate_trace({1000, 1 << 20, 43, 256}));
    for (uint64_t x : a) {
        EXPECT_EQ(x % 256, 0u);
        EXPECT_LT(x, uint64_t{1} << 20);
    }
}

TEST(Trace, BucketsAreUniformWithinFivePercent) {
    const uint64_t region = uint64_t{1} << 26;
    const auto a = generate_trace({100'000, region, 1, 64});
    std::vector<uint64_t> buckets(16, 0);
    for (uint64_t x : a) ++buckets[x / (region / 16)];
    for (uint64_t b : buckets) {
        EXPECT_GE(b, 6250u * 95 / 100);
        EXPECT_LE(b, 6250u * 105 / 100);
    }
}

TEST(Trace, InvalidRegions) {
    EXPECT_EQ(code_of([] { generate_trace({1, 4096, 1, 448}); }), ErrorCode::InvalidRegion);
    EXPECT_EQ(code_of([] { generate_trace({1, 4096, 1, 0}); }), ErrorCode::InvalidRegion);
    EXPECT_EQ(code_of([] { generate_trace({1, 32, 1, 64}); }), ErrorCode::InvalidRegion);
    EXPECT_TRUE(generate_trace({0, 64, 1, 64}).empty());
}

TEST(Enums, NamesRoundTrip) {
    for (auto k : {KernelKind::Sum, KernelKind::AggregateN, KernelKind::Filter, KernelKind::Flush,
                   KernelKind::MemcpyBaseline})
        EXPECT_EQ(parse_kernel_kind(to_string(k)), k);
    for (auto s : {Strategy::Phased, Strategy::Sequential, Strategy::Batch})
        EXPECT_EQ(parse_strategy(to_string(s)), s);
    EXPECT_EQ(parse_materialization("bitvector"), Materialization::Bitvector);
    EXPECT_EQ(parse_flush_method("memcpy"), FlushMethod::Memcpy);
    EXPECT_EQ(code_of([] { parse_strategy("eager"); }), ErrorCode::ConfigInvalid);
}

TEST(KernelSpec, ValidationErrors) {
    KernelSpec k;
    k.transfer_size = 12;
    EXPECT_EQ(code_of([&] { k.validate(); }), ErrorCode::InvalidTransferSize);
    k = {};
    k.distance = 0;
    EXPECT_EQ(code_of([&] { k.validate(); }), ErrorCode::ConfigInvalid);
    k.strategy = Strategy::Phased;
    EXPECT_NO_THROW(k.validate());
    k = {};
    k.kind = KernelKind::AggregateN;
    k.attribute_count = 9;
    EXPECT_EQ(code_of([&] { k.validate(); }), ErrorCode::RowTooLarge);
    k = {};
    k.selectivity = 1.5;
    EXPECT_EQ(code_of([&] { k.validate(); }), ErrorCode::ConfigInvalid);
    k = {};
    k.kind = KernelKind::Flush;
    k.flush_threshold = 100;
    EXPECT_EQ(code_of([&] { k.validate(); }), ErrorCode::InvalidTransferSize);
}

TEST(KernelSpec, ComputePerElement) {
    KernelSpec k;
    k.intensity_instr_per_elem = 23;
    EXPECT_EQ(k.compute_per_element(), 23u);
    k.kind = KernelKind::AggregateN;
    k.attribute_count = 5;
    EXPECT_EQ(k.compute_per_element(), 20u);
    k.kind = KernelKind::Filter;
    EXPECT_EQ(k.compute_per_element(), 2u);
    k.materialization = Materialization::Bitvector;
    EXPECT_EQ(k.compute_per_element(), 5u);
}

TEST(DbOps, CatalogLookup) {
    EXPECT_EQ(db_op("hash_probe").instr_per_record, 40u);
    EXPECT_EQ(db_op("selection").instr_per_record, 2u);
    EXPECT_EQ(db_op_catalog().size(), 5u);
    EXPECT_EQ(code_of([] { db_op("join"); }), ErrorCode::ConfigInvalid);
}

TEST(PadFootprint, PerStrategyBuffers) {
    KernelSpec k;
    k.distance = 8;
    k.transfer_size = 128;
    k.strategy = Strategy::Phased;
    EXPECT_EQ(pad_footprint(k, 1), 128u);
    k.strategy = Strategy::Sequential;
    EXPECT_EQ(pad_footprint(k, 1), 9u * 128);
    k.strategy = Strategy::Batch;
    EXPECT_EQ(pad_footprint(k, 1), 16u * 128);
    EXPECT_EQ(pad_footprint(k, 16), 16u * 128);
    k.kind = KernelKind::Filter;
    k.materialization = Materialization::Bitvector;
    EXPECT_EQ(pad_footprint(k, 4), 4u * (128 + 64));
    k.distance = 64;
    k.transfer_size = 4096;
    k.kind = KernelKind::Sum;
    EXPECT_EQ(code_of([&] { build_kernel(k, {}, PeProfile::ndp(), kPad); }),
              ErrorCode::ScratchpadOverflow);
}

TEST(SumKernel, BatchWithWritebackIssuesAheadThenConsumesAndDrains) {
    KernelSpec k;
    k.elements = 12;
    k.distance = 4;
    k.writeback = true;
    k.addr_gen_instr = 0;
    WorkloadLayout layout;
    const auto trace = generate_trace({12, layout.input_bytes, layout.seed, 64});
    const Program p = build_sum_kernel(k, layout, PeProfile::ndp(), kPad).at(0);
    size_t i = 0;
    ASSERT_TRUE(std::holds_alternative<op::SetTransferSize>(p[i++]));
    for (int b = 0; b < 2; ++b) {
        for (uint32_t j = 0; j < 4; ++j, ++i) {
            const auto& pre = std::get<op::Preload>(p.at(i));
            EXPECT_EQ(pre.main_addr, trace[b * 4 + j]);
            EXPECT_EQ(pre.pad_offset, (b * 4 + j) * 64);
        }
    }
    const auto& w = std::get<op::Wait>(p.at(i++));
    EXPECT_EQ(w.kind, WaitKind::Preloads);
    EXPECT_EQ(w.at_most, 4u);
    for (uint32_t j = 0; j < 4; ++j, ++i) {
        const auto& c = std::get<op::Compute>(p.at(i));
        EXPECT_EQ(c.access.kind, PadAccess::Kind::Read);
        EXPECT_EQ(c.access.offset, j * 64);
    }
    const auto& u = std::get<op::Unload>(p.at(i++));
    EXPECT_EQ(u.pad_offset, 0u);
    EXPECT_EQ(u.size_bytes, 256u);
    EXPECT_EQ(u.main_addr, layout.output_base);
    // Refilling the first half must first drain its unload.
    const auto& drain = std::get<op::Wait>(p.at(i));
    EXPECT_EQ(drain.kind, WaitKind::Unloads);
    EXPECT_EQ(drain.at_most, 0u);
}

TEST(SumKernel, SequentialKeepsDistanceRequestsInFlight) {
    KernelSpec k;
    k.elements = 10;
    k.distance = 3;
    k.strategy = Strategy::Sequential;
    const Program p = build_sum_kernel(k, {}, PeProfile::ndp(), kPad).at(0);
    std::vector<uint32_t> thresholds;
    for (const auto& a : p)
        if (const auto* w = std::get_if<op::Wait>(&a)) thresholds.push_back(w->at_most);
    EXPECT_EQ(thresholds, (std::vector<uint32_t>{3, 3, 3, 3, 3, 3, 3, 2, 1, 0}));
    EXPECT_EQ(count<op::Preload>(p), 10u);
}

TEST(SumKernel, StrategiesPerformIdenticalWork) {
    for (uint64_t n : {1u, 7u, 64u, 100u}) {
        std::set<uint64_t> totals;
        for (auto s : {Strategy::Phased, Strategy::Sequential, Strategy::Batch}) {
            KernelSpec k;
            k.elements = n;
            k.distance = 6;
            k.strategy = s;
            const auto ps = build_sum_kernel(k, {}, PeProfile::ndp(), kPad);
            EXPECT_EQ(count<op::Preload>(ps[0]), n);
            totals.insert(instructions(ps));
        }
        EXPECT_EQ(totals.size(), 1u);
        EXPECT_EQ(*totals.begin(), n * 5);
    }
}

TEST(SumKernel, PimSplitsRowsAcrossTaskletsWithoutWaits) {
    KernelSpec k;
    k.elements = 100;
    const auto ps = build_sum_kernel(k, {}, PeProfile::pim(16), kPad);
    ASSERT_EQ(ps.size(), 16u);
    size_t preloads = 0;
    for (uint32_t t = 0; t < 16; ++t) {
        EXPECT_EQ(count<op::Wait>(ps[t]), 0u);
        EXPECT_EQ(count<op::Preload>(ps[t]), 100 / 16 + (t < 100 % 16));
        for (const auto& a : ps[t])
            if (const auto* pre = std::get_if<op::Preload>(&a)) EXPECT_EQ(pre->pad_offset, t * 64);
        preloads += count<op::Preload>(ps[t]);
    }
    EXPECT_EQ(preloads, 100u);
}

TEST(AggregateKernel, ReadsOneWordPerAttribute) {
    KernelSpec k;
    k.kind = KernelKind::AggregateN;
    k.attribute_count = 6;
    k.elements = 4;
    const auto ps = build_kernel(k, {}, PeProfile::pim(1), kPad);
    for (const auto& a : ps[0])
        if (const auto* c = std::get_if<op::Compute>(&a); c && c->access.kind == PadAccess::Kind::Read) {
            EXPECT_EQ(c->access.len, 48u);
            EXPECT_EQ(c->instructions, 24u);
        }
}

TEST(FilterKernel, FullMaterializationUnloadsExactlyThePassingRecords) {
    for (double s : {0.0, 0.25, 1.0}) {
        KernelSpec k;
        k.kind = KernelKind::Filter;
        k.elements = 1000;
        k.selectivity = s;
        WorkloadLayout layout;
        uint64_t expected = 0;
        for (uint64_t i = 0; i < 1000; ++i) expected += filter_passes(layout.seed, i, s);
        const auto ps = build_kernel(k, layout, PeProfile::pim(8), kPad);
        size_t unloads = 0;
        for (const auto& p : ps) unloads += count<op::Unload>(p);
        EXPECT_EQ(unloads, expected);
    }
}

TEST(FilterKernel, BitvectorUnloadsOneBlockPer512Records) {
    KernelSpec k;
    k.kind = KernelKind::Filter;
    k.materialization = Materialization::Bitvector;
    k.elements = 4096;
    k.selectivity = 0.5;
    const auto ps = build_kernel(k, {}, PeProfile::pim(4), kPad);
    for (const auto& p : ps) {
        EXPECT_EQ(count<op::Unload>(p), 2u);  // 1024 records per tasklet
        for (const auto& a : p)
            if (const auto* u = std::get_if<op::Unload>(&a)) EXPECT_EQ(u->size_bytes, 64u);
    }
    const auto ndp = build_kernel(k, {}, PeProfile::ndp(), kPad);
    EXPECT_EQ(count<op::Unload>(ndp[0]), 8u);
    EXPECT_EQ(count<op::Wait>(ndp[0]), 4096u + 8u);
}

TEST(FilterKernel, SelectivityIsRespectedStatistically) {
    uint64_t pass = 0;
    for (uint64_t i = 0; i < 100'000; ++i) pass += filter_passes(9, i, 0.3);
    EXPECT_NEAR(pass / 1e5, 0.3, 0.01);
    EXPECT_FALSE(filter_passes(9, 5, 0.0));
    EXPECT_TRUE(filter_passes(9, 5, 1.0));
}

TEST(FlushKernel, PulUnloadsWholeBuffersMemcpyUsesCacheLines) {
    KernelSpec k;
    k.kind = KernelKind::Flush;
    k.elements = 1000;  // 8000 B of updates
    k.flush_threshold = 1024;
    const Program pul = build_kernel(k, {}, PeProfile::ndp(), kPad).at(0);
    EXPECT_EQ(count<op::Unload>(pul), 8u);
    k.flush_method = FlushMethod::Memcpy;
    const Program mc = build_kernel(k, {}, PeProfile::ndp(), kPad).at(0);
    EXPECT_EQ(count<op::Unload>(mc), 125u);
    k.kind = KernelKind::MemcpyBaseline;
    k.flush_method = FlushMethod::Pul;
    EXPECT_EQ(count<op::Unload>(build_kernel(k, {}, PeProfile::ndp(), kPad).at(0)), 125u);
    uint64_t bytes = 0;
    for (const auto& a : pul)
        if (const auto* u = std::get_if<op::Unload>(&a)) bytes += u->size_bytes;
    EXPECT_EQ(bytes, 8000u);
    k.flush_threshold = 48 * 1024;
    EXPECT_EQ(code_of([&] { build_kernel(k, {}, PeProfile::ndp(), kPad); }),
              ErrorCode::ScratchpadOverflow);
}
