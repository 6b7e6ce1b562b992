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
#include <span>
#include <vector>

#include "pulsim/dma_request.hpp"
#include "pulsim/sim.hpp"

namespace pulsim {

/// Pad bytes touched by a DMA transfer that has not yet been observed as
/// complete through the status register.
struct InFlightRegion {
    uint32_t offset = 0;
    uint32_t len = 0;
    DmaDirection direction = DmaDirection::Preload;
    uint64_t ticket_id = 0;
    SimTime completion;
};

/// PE-local, software-managed SRAM. Access costs one PE cycle per 8-byte word.
///
/// Contents are only kept when `keep_values` is set; timing-only runs skip
/// the byte array entirely.
class Scratchpad {
public:
    static constexpr uint32_t kWordBytes = 8;
    static constexpr uint32_t kDefaultCapacity = 64 * 1024;

    explicit Scratchpad(uint32_t capacity_bytes = kDefaultCapacity, bool keep_values = false);

    /// Returns the bytes (empty in timing mode) and the cycle cost via `cycles`.
    std::span<const uint8_t> read(uint32_t offset, uint32_t len, SimTime now,
                                  uint64_t* cycles = nullptr) const;
    /// Returns cycles charged (one per word, zero for an empty write).
    uint64_t write(uint32_t offset, std::span<const uint8_t> bytes, SimTime now);

    /// Hazard and bounds checks alone, for timing-only accesses.
    void check_read(uint32_t offset, uint32_t len, SimTime now) const;
    void check_write(uint32_t offset, uint32_t len, SimTime now) const;

    uint64_t read_word(uint32_t offset, SimTime now) const;
    void write_word(uint32_t offset, uint64_t value, SimTime now);

    /// Hazard-checked registration of a DMA region. A new transfer may not
    /// overlap any region still marked in flight.
    void mark_in_flight(const InFlightRegion& region);
    /// Drops regions whose transfer completed at or before `now`.
    size_t retire_completed(SimTime now);
    void retire(uint64_t ticket_id);

    /// DMA-side data movement for value-check mode; bypasses hazard checks.
    void dma_fill(uint32_t offset, std::span<const uint8_t> bytes);
    std::span<const uint8_t> dma_view(uint32_t offset, uint32_t len) const;

    uint32_t capacity() const { return capacity_; }
    bool keeps_values() const { return keep_values_; }
    const std::vector<InFlightRegion>& in_flight() const { return regions_; }

private:
    void check_bounds(uint32_t offset, uint32_t len) const;
    bool overlaps(uint32_t offset, uint32_t len, const InFlightRegion& r) const;

    uint32_t capacity_;
    bool keep_values_;
    std::vector<uint8_t> content_;
    std::vector<InFlightRegion> regions_;
};

}  // namespace pulsim
