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

#include "pulsim/memory.hpp"

#include <algorithm>

#include "pulsim/error.hpp"

namespace pulsim {

DeviceProfile DeviceProfile::by_name(const std::string& name) {
    if (name == "dram") return dram();
    if (name == "nvm") return nvm();
    throw Error(ErrorCode::ConfigInvalid, "unknown device profile '" + name + "'");
}

ChannelProfile ChannelProfile::by_name(const std::string& name) {
    if (name == "system") return system();
    if (name == "upmem_mram") return upmem_mram();
    if (name == "upmem_calibrated") return upmem_calibrated();
    throw Error(ErrorCode::ConfigInvalid, "unknown channel profile '" + name + "'");
}

MainMemory::MainMemory(DeviceProfile device, ChannelProfile channel, uint64_t region_bytes)
    : device_(std::move(device)), channel_(std::move(channel)), region_bytes_(region_bytes) {
    if (device_.read_latency_ns == 0 || device_.write_latency_ns == 0) {
        throw Error(ErrorCode::ConfigInvalid, "device '" + device_.label + "' needs latencies > 0");
    }
    if (channel_.bandwidth_bytes_per_sec == 0) {
        throw Error(ErrorCode::ConfigInvalid, "channel '" + channel_.label + "' needs bandwidth > 0");
    }
}

uint64_t MainMemory::transfer_time_ps(uint64_t size) const {
    const unsigned __int128 num = static_cast<unsigned __int128>(size) * 1'000'000'000'000ULL;
    const unsigned __int128 bw = channel_.bandwidth_bytes_per_sec;
    return static_cast<uint64_t>((num + bw - 1) / bw);
}

uint64_t MainMemory::latency_ps(DmaDirection d) const {
    return 1000 * (d == DmaDirection::Preload ? device_.read_latency_ns : device_.write_latency_ns);
}

TransferTicket MainMemory::submit(const DmaRequest& request, SimTime now) {
    if (request.size_bytes == 0) {
        throw Error(ErrorCode::ZeroSizeTransfer, "transfer of 0 bytes");
    }
    if (request.main_addr + request.size_bytes > region_bytes_) {
        throw Error(ErrorCode::AddressOutOfRange,
                    "[" + std::to_string(request.main_addr) + ", +" +
                        std::to_string(request.size_bytes) + ") outside " +
                        std::to_string(region_bytes_) + " B region");
    }
    // Arrival-order arbitration is only meaningful if arrivals are ordered.
    if (now < last_submit_) {
        throw Error(ErrorCode::SchedulingInPast, "memory submission out of time order");
    }
    last_submit_ = now;

    const SimTime ready = now + SimTime::from_ps(latency_ps(request.direction));
    const SimTime start = std::max(ready, channel_free_);
    const SimTime done = start + SimTime::from_ps(transfer_time_ps(request.size_bytes));
    channel_free_ = done;

    TransferTicket t;
    t.id = next_id_++;
    t.request = request;
    t.issue_time = now;
    t.transfer_start = start;
    t.completion_time = done;
    t.queued_channel_wait_ps = (start - ready).ps();

    phases_.push_back({start.ps(), done.ps(), request.size_bytes});
    if (request.direction == DmaDirection::Preload) {
        bytes_read_ += request.size_bytes;
    } else {
        bytes_written_ += request.size_bytes;
    }
    return t;
}

double MainMemory::observed_throughput(SimTime begin, SimTime end) const {
    if (end <= begin) {
        throw Error(ErrorCode::EmptyWindow, "throughput window must be non-empty");
    }
    const uint64_t b = begin.ps();
    const uint64_t e = end.ps();
    double bytes = 0.0;
    for (const Phase& p : phases_) {
        if (p.end_ps <= b || p.start_ps >= e) continue;
        const uint64_t lo = std::max(p.start_ps, b);
        const uint64_t hi = std::min(p.end_ps, e);
        bytes += static_cast<double>(p.bytes) * static_cast<double>(hi - lo) /
                 static_cast<double>(p.end_ps - p.start_ps);
    }
    return bytes * 1e12 / static_cast<double>(e - b);
}

SimTime MainMemory::first_transfer_start() const {
    return phases_.empty() ? SimTime{} : SimTime::from_ps(phases_.front().start_ps);
}

uint64_t MainMemory::initial_word(uint64_t addr) {
    // splitmix64 of the word index, kept to 16 bits so sums stay readable.
    uint64_t z = (addr >> 3) + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z & 0xffff;
}

uint64_t MainMemory::load_word(uint64_t addr) const {
    if (auto it = written_.find(addr & ~uint64_t{7}); it != written_.end()) return it->second;
    return initial_word(addr);
}

void MainMemory::store_word(uint64_t addr, uint64_t value) {
    written_[addr & ~uint64_t{7}] = value;
}

}  // namespace pulsim
