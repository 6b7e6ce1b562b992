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

#include "pulsim/pul_engine.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulsim/error.hpp"

namespace pulsim {

PulEngine::PulEngine(MainMemory& memory, Scratchpad& pad, PulEngineConfig config, uint64_t cycle_ps)
    : memory_(memory), pad_(pad), config_(config), cycle_ps_(cycle_ps), size_register_(0) {
    if (config_.fifo_depth == 0) {
        throw Error(ErrorCode::ConfigInvalid, "fifo_depth must be >= 1");
    }
    if (cycle_ps_ == 0) {
        throw Error(ErrorCode::ConfigInvalid, "PE cycle must be > 0 ps");
    }
    validate_size(config_.default_transfer_size);
}

void PulEngine::validate_size(uint32_t bytes) const {
    if (bytes < Scratchpad::kWordBytes || bytes % Scratchpad::kWordBytes != 0 ||
        bytes > pad_.capacity()) {
        throw Error(ErrorCode::InvalidTransferSize,
                    std::to_string(bytes) + " B (needs a multiple of 8 in [8, " +
                        std::to_string(pad_.capacity()) + "])");
    }
}

uint64_t PulEngine::set_transfer_size(uint32_t bytes) {
    validate_size(bytes);
    if (size_register_ == bytes) return 0;
    size_register_ = bytes;
    ++register_writes_;
    return 1;
}

SimTime PulEngine::align_up(SimTime t) const {
    return SimTime::from_ps(cycles_ceil(t.ps(), cycle_ps_) * cycle_ps_);
}

TransferTicket PulEngine::submit(DmaDirection dir, uint64_t main_addr, uint32_t pad_offset,
                                 uint32_t size_bytes, SimTime now, uint32_t tasklet) {
    if (size_bytes == 0) {
        throw Error(ErrorCode::ZeroSizeTransfer, std::string(to_string(dir)) + " of 0 bytes");
    }
    validate_size(size_bytes);
    if (fifo_full(dir, now)) {
        throw std::logic_error("PulEngine::submit on a full FIFO");
    }
    auto& q = fifo_[idx(dir)];
    while (!q.empty() && q.front().completion <= now) q.pop_front();

    DmaRequest req;
    req.direction = dir;
    req.main_addr = main_addr;
    req.pad_offset = pad_offset;
    req.size_bytes = size_bytes;
    req.enqueued_at = now;
    TransferTicket ticket = memory_.submit(req, now);

    pad_.mark_in_flight({pad_offset, size_bytes, dir, ticket.id, ticket.completion_time});

    if (pad_.keeps_values()) {
        if (dir == DmaDirection::Preload) {
            std::vector<uint8_t> buf(size_bytes);
            for (uint32_t w = 0; w < size_bytes; w += Scratchpad::kWordBytes) {
                const uint64_t v = memory_.load_word(main_addr + w);
                std::memcpy(buf.data() + w, &v, sizeof v);
            }
            pad_.dma_fill(pad_offset, buf);
        } else {
            auto src = pad_.dma_view(pad_offset, size_bytes);
            for (uint32_t w = 0; w < size_bytes; w += Scratchpad::kWordBytes) {
                uint64_t v;
                std::memcpy(&v, src.data() + w, sizeof v);
                memory_.store_word(main_addr + w, v);
            }
        }
    }

    q.push_back({ticket.id, ticket.completion_time, tasklet});
    ++enqueued_[idx(dir)];
    bytes_[idx(dir)] += size_bytes;
    return ticket;
}

bool PulEngine::fifo_full(DmaDirection dir, SimTime now) const {
    const auto& q = fifo_[idx(dir)];
    if (q.size() < config_.fifo_depth) return false;
    // Entries are in completion order; count those still outstanding.
    auto first_pending = std::upper_bound(
        q.begin(), q.end(), now, [](SimTime t, const Outstanding& o) { return t < o.completion; });
    return static_cast<uint64_t>(q.end() - first_pending) >= config_.fifo_depth;
}

SimTime PulEngine::oldest_completion(DmaDirection dir, SimTime now) const {
    for (const auto& o : fifo_[idx(dir)]) {
        if (o.completion > now) return o.completion;
    }
    return now;
}

uint32_t PulEngine::pending(WaitKind kind, SimTime now, uint32_t tasklet) const {
    uint32_t n = 0;
    for (DmaDirection d : {DmaDirection::Preload, DmaDirection::Unload}) {
        if (kind == WaitKind::Preloads && d != DmaDirection::Preload) continue;
        if (kind == WaitKind::Unloads && d != DmaDirection::Unload) continue;
        const auto& q = fifo_[idx(d)];
        if (tasklet == kNoTasklet) {
            auto it = std::upper_bound(q.begin(), q.end(), now, [](SimTime t, const Outstanding& o) {
                return t < o.completion;
            });
            n += static_cast<uint32_t>(q.end() - it);
        } else {
            for (const auto& o : q) {
                if (o.tasklet == tasklet && o.completion > now) ++n;
            }
        }
    }
    return n;
}

SimTime PulEngine::time_when_at_most(WaitKind kind, uint32_t at_most, SimTime now,
                                     uint32_t tasklet) const {
    std::vector<SimTime> open;
    for (DmaDirection d : {DmaDirection::Preload, DmaDirection::Unload}) {
        if (kind == WaitKind::Preloads && d != DmaDirection::Preload) continue;
        if (kind == WaitKind::Unloads && d != DmaDirection::Unload) continue;
        for (const auto& o : fifo_[idx(d)]) {
            if (o.completion > now && (tasklet == kNoTasklet || o.tasklet == tasklet)) {
                open.push_back(o.completion);
            }
        }
    }
    if (open.size() <= at_most) return now;
    const size_t must_finish = open.size() - at_most;
    std::nth_element(open.begin(), open.begin() + static_cast<long>(must_finish - 1), open.end());
    return open[must_finish - 1];
}

PulStatus PulEngine::sample_status(SimTime now, uint32_t tasklet) {
    pad_.retire_completed(now);
    for (auto& q : fifo_) {
        while (!q.empty() && q.front().completion <= now) q.pop_front();
    }
    return {pending(WaitKind::Preloads, now, tasklet), pending(WaitKind::Unloads, now, tasklet)};
}

uint64_t PulEngine::completed(DmaDirection dir, SimTime now) const {
    return enqueued_[idx(dir)] -
           pending(dir == DmaDirection::Preload ? WaitKind::Preloads : WaitKind::Unloads, now);
}

EnqueueResult PulEngine::enqueue(DmaDirection dir, uint64_t main_addr, uint32_t pad_offset,
                                 uint32_t size_bytes, SimTime now) {
    EnqueueResult r;
    SimTime t = now;
    const uint32_t overhead = issue_overhead(dir);
    SimTime dispatch = t + SimTime::from_ps(overhead * cycle_ps_);
    if (fifo_full(dir, dispatch)) {
        const SimTime free_at = align_up(oldest_completion(dir, dispatch));
        r.stall_cycles = (free_at - dispatch).ps() / cycle_ps_;
        dispatch = free_at;
    }
    r.issue_cycles = overhead;
    r.ticket = submit(dir, main_addr, pad_offset, size_bytes, dispatch);
    r.resume_at = dispatch;
    return r;
}

EnqueueResult PulEngine::preload(uint64_t main_addr, uint32_t pad_offset, SimTime now) {
    const uint32_t size = size_register_ ? size_register_ : config_.default_transfer_size;
    return enqueue(DmaDirection::Preload, main_addr, pad_offset, size, now);
}

EnqueueResult PulEngine::unload(uint32_t pad_offset, uint64_t main_addr, uint32_t size_bytes,
                                SimTime now) {
    return enqueue(DmaDirection::Unload, main_addr, pad_offset, size_bytes, now);
}

PulStatus PulEngine::status(SimTime now) {
    return sample_status(now + SimTime::from_ps(cycle_ps_));
}

WaitResult PulEngine::wait(WaitKind kind, SimTime now) {
    // Each poll occupies one cycle and samples the register at its end.
    WaitResult r;
    const SimTime ready = time_when_at_most(kind, 0, now + SimTime::from_ps(cycle_ps_));
    const uint64_t first_end = now.ps() + cycle_ps_;
    if (ready.ps() <= first_end) {
        r.poll_cycles = 1;
        r.resume_at = SimTime::from_ps(first_end);
    } else {
        // Last poll is the first cycle whose end reaches `ready`.
        const uint64_t total = cycles_ceil(ready.ps() - now.ps(), cycle_ps_);
        r.poll_cycles = 1;
        r.stall_cycles = total - 1;
        r.resume_at = SimTime::from_ps(now.ps() + total * cycle_ps_);
    }
    sample_status(r.resume_at);
    return r;
}

}  // namespace pulsim
