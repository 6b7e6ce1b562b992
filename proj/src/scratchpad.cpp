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

#include "pulsim/scratchpad.hpp"

#include <algorithm>
#include <cstring>
#include <string>

#include "pulsim/error.hpp"

namespace pulsim {

namespace {

std::string span_str(uint64_t offset, uint64_t len) {
    return "[" + std::to_string(offset) + ", " + std::to_string(offset + len) + ")";
}

uint64_t words(uint64_t len) { return (len + Scratchpad::kWordBytes - 1) / Scratchpad::kWordBytes; }

}  // namespace

Scratchpad::Scratchpad(uint32_t capacity_bytes, bool keep_values)
    : capacity_(capacity_bytes), keep_values_(keep_values) {
    if (capacity_ == 0) {
        throw Error(ErrorCode::ConfigInvalid, "scratchpad capacity must be > 0");
    }
    if (keep_values_) content_.assign(capacity_, 0);
}

void Scratchpad::check_bounds(uint32_t offset, uint32_t len) const {
    if (uint64_t{offset} + len > capacity_) {
        throw Error(ErrorCode::OutOfBounds,
                    span_str(offset, len) + " exceeds " + std::to_string(capacity_) + " B pad");
    }
}

bool Scratchpad::overlaps(uint32_t offset, uint32_t len, const InFlightRegion& r) const {
    return len > 0 && offset < r.offset + r.len && r.offset < offset + len;
}

void Scratchpad::check_read(uint32_t offset, uint32_t len, SimTime now) const {
    check_bounds(offset, len);
    for (const auto& r : regions_) {
        if (r.direction == DmaDirection::Preload && overlaps(offset, len, r)) {
            throw Error(ErrorCode::ReadDuringPendingPreload,
                        "read " + span_str(offset, len) + " at " + std::to_string(now.ps()) +
                            " ps overlaps preload " + span_str(r.offset, r.len));
        }
    }
}

void Scratchpad::check_write(uint32_t offset, uint32_t len, SimTime now) const {
    check_bounds(offset, len);
    for (const auto& r : regions_) {
        if (r.direction == DmaDirection::Unload && overlaps(offset, len, r)) {
            throw Error(ErrorCode::WriteDuringPendingUnload,
                        "write " + span_str(offset, len) + " at " + std::to_string(now.ps()) +
                            " ps overlaps unload " + span_str(r.offset, r.len));
        }
    }
}

std::span<const uint8_t> Scratchpad::read(uint32_t offset, uint32_t len, SimTime now,
                                          uint64_t* cycles) const {
    check_read(offset, len, now);
    if (cycles) *cycles = words(len);
    if (!keep_values_) return {};
    return std::span<const uint8_t>(content_).subspan(offset, len);
}

uint64_t Scratchpad::write(uint32_t offset, std::span<const uint8_t> bytes, SimTime now) {
    const auto len = static_cast<uint32_t>(bytes.size());
    check_bounds(offset, len);
    if (len == 0) return 0;
    check_write(offset, len, now);
    if (keep_values_) std::memcpy(content_.data() + offset, bytes.data(), len);
    return words(len);
}

uint64_t Scratchpad::read_word(uint32_t offset, SimTime now) const {
    auto bytes = read(offset, kWordBytes, now);
    uint64_t v = 0;
    if (!bytes.empty()) std::memcpy(&v, bytes.data(), sizeof v);
    return v;
}

void Scratchpad::write_word(uint32_t offset, uint64_t value, SimTime now) {
    uint8_t buf[kWordBytes];
    std::memcpy(buf, &value, sizeof buf);
    write(offset, buf, now);
}

void Scratchpad::mark_in_flight(const InFlightRegion& region) {
    check_bounds(region.offset, region.len);
    for (const auto& r : regions_) {
        if (overlaps(region.offset, region.len, r)) {
            throw Error(ErrorCode::DmaOverlapsPendingRegion,
                        std::string(to_string(region.direction)) + " " +
                            span_str(region.offset, region.len) + " overlaps pending " +
                            std::string(to_string(r.direction)) + " " + span_str(r.offset, r.len));
        }
    }
    regions_.push_back(region);
}

size_t Scratchpad::retire_completed(SimTime now) {
    const auto before = regions_.size();
    std::erase_if(regions_, [now](const InFlightRegion& r) { return r.completion <= now; });
    return before - regions_.size();
}

void Scratchpad::retire(uint64_t ticket_id) {
    std::erase_if(regions_, [ticket_id](const InFlightRegion& r) { return r.ticket_id == ticket_id; });
}

void Scratchpad::dma_fill(uint32_t offset, std::span<const uint8_t> bytes) {
    check_bounds(offset, static_cast<uint32_t>(bytes.size()));
    if (keep_values_) std::memcpy(content_.data() + offset, bytes.data(), bytes.size());
}

std::span<const uint8_t> Scratchpad::dma_view(uint32_t offset, uint32_t len) const {
    check_bounds(offset, len);
    if (!keep_values_) return {};
    return std::span<const uint8_t>(content_).subspan(offset, len);
}

}  // namespace pulsim
