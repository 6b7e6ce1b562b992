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

#include "pulsim/pe.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "pulsim/error.hpp"

namespace pulsim {

namespace {

constexpr uint64_t kNever = std::numeric_limits<uint64_t>::max();
constexpr uint32_t kEventStart = 0;
constexpr uint32_t kEventSubmit = 1;

constexpr size_t dir_index(DmaDirection d) { return d == DmaDirection::Preload ? 0 : 1; }

}  // namespace

void PeProfile::validate() const {
    if (freq_mhz == 0) throw Error(ErrorCode::ConfigInvalid, "freq_mhz must be > 0");
    if (pipeline_depth == 0) throw Error(ErrorCode::ConfigInvalid, "pipeline_depth must be >= 1");
    if (tasklets == 0) throw Error(ErrorCode::ConfigInvalid, "tasklets must be >= 1");
    if (tasklets > max_tasklets) {
        throw Error(ErrorCode::ConfigInvalid, std::to_string(tasklets) + " tasklets exceed the " +
                                                  std::to_string(max_tasklets) + " the " +
                                                  std::string(to_string(kind)) + " PE supports");
    }
}

uint64_t exec_compute(const PeProfile& profile, uint64_t instructions, uint32_t tasklet_id) {
    if (tasklet_id >= profile.tasklets) {
        throw Error(ErrorCode::UnknownTasklet, "tasklet " + std::to_string(tasklet_id) + " of " +
                                                   std::to_string(profile.tasklets));
    }
    return instructions * profile.pipeline_depth;
}

uint64_t exec_compute_concurrent(const PeProfile& profile, std::span<const uint64_t> per_tasklet) {
    if (per_tasklet.size() > profile.tasklets) {
        throw Error(ErrorCode::UnknownTasklet, std::to_string(per_tasklet.size()) +
                                                   " tasklets requested, profile has " +
                                                   std::to_string(profile.tasklets));
    }
    MainMemory memory(DeviceProfile::dram(), ChannelProfile::system(), 1 << 20);
    Simulator sim;
    PeProfile p = profile;
    p.tasklets = std::max<uint32_t>(1, static_cast<uint32_t>(per_tasklet.size()));
    ProcessingElement pe(0, p, PulEngineConfig{}, Scratchpad::kDefaultCapacity, false, memory);
    std::vector<Program> programs;
    for (uint64_t n : per_tasklet) programs.push_back(Program{op::Compute{n, {}}});
    pe.load(std::move(programs));
    pe.attach(sim);
    sim.run_until_idle();
    return pe.stats().total_cycles;
}

ProcessingElement::ProcessingElement(uint32_t id, PeProfile profile, PulEngineConfig engine_config,
                                     uint32_t pad_capacity, bool keep_values, MainMemory& memory)
    : id_(id), profile_(profile), cycle_ps_(profile.cycle_ps()), memory_(memory) {
    profile_.validate();
    pad_ = std::make_unique<Scratchpad>(pad_capacity, keep_values);
    engine_ = std::make_unique<PulEngine>(memory_, *pad_, engine_config, cycle_ps_);
}

void ProcessingElement::load(std::vector<Program> programs) {
    if (programs.size() > profile_.tasklets) {
        throw Error(ErrorCode::UnknownTasklet, std::to_string(programs.size()) +
                                                   " programs for " +
                                                   std::to_string(profile_.tasklets) + " tasklets");
    }
    tasklets_.clear();
    tasklets_.resize(programs.size());
    for (size_t i = 0; i < programs.size(); ++i) tasklets_[i].program = std::move(programs[i]);
    stats_ = PeStats{};
    stats_.per_tasklet.resize(programs.size());
    cycle_ = 0;
    rr_next_ = 0;
    finished_ = false;
}

void ProcessingElement::attach(Simulator& sim) {
    sim_ = &sim;
    handler_ = sim.add_handler("pe" + std::to_string(id_),
                               [this](Simulator& s, const Event&) { on_event(s); });
    sim.schedule(SimTime{}, handler_, kEventStart);
}

uint32_t ProcessingElement::scope(uint32_t tasklet) const {
    return tasklets_.size() == 1 ? PulEngine::kNoTasklet : tasklet;
}

uint64_t ProcessingElement::wake_cycle(const Tasklet& t) const {
    if (t.submit_pending) return t.submit_cycle;
    return std::max(t.next_issue, t.blocked_until);
}

bool ProcessingElement::eligible(const Tasklet& t) const {
    return !t.done() && !t.submit_pending && t.blocked_until <= cycle_ && t.next_issue <= cycle_;
}

void ProcessingElement::on_event(Simulator& sim) {
    const size_t n = tasklets_.size();
    for (;;) {
        for (uint32_t i = 0; i < n; ++i) {
            Tasklet& t = tasklets_[i];
            if (t.submit_pending && t.submit_cycle <= cycle_) {
                // The channel is shared: hand the request over at its exact instant.
                if (sim.now().ps() < time_ps(cycle_)) {
                    sim.schedule(SimTime::from_ps(time_ps(cycle_)), handler_, kEventSubmit, id_);
                    return;
                }
                submit(t, i);
            }
        }

        bool all_done = true;
        for (const auto& t : tasklets_) all_done = all_done && t.done();
        if (all_done) {
            finish();
            return;
        }

        bool issued = false;
        for (size_t k = 0; k < n; ++k) {
            const auto i = static_cast<uint32_t>((rr_next_ + k) % n);
            if (eligible(tasklets_[i])) {
                // Zero-cost actions leave the round-robin position alone.
                const uint64_t before = cycle_;
                step(tasklets_[i], i);
                if (cycle_ != before) rr_next_ = static_cast<uint32_t>((i + 1) % n);
                issued = true;
                break;
            }
        }
        if (issued) continue;

        // Nobody can issue: skip to the next cycle where someone can.
        uint64_t next = kNever;
        uint64_t unblock = kNever;
        for (const auto& t : tasklets_) {
            if (t.done()) continue;
            next = std::min(next, wake_cycle(t));
            unblock = std::min(unblock, t.submit_pending ? t.submit_cycle : t.blocked_until);
        }
        if (next <= cycle_) throw std::logic_error("PE scheduler made no progress");
        const uint64_t stall_end = std::min(std::max(unblock, cycle_), next);
        stats_.stall_cycles += stall_end - cycle_;
        stats_.idle_cycles += next - stall_end;
        cycle_ = next;
    }
}

void ProcessingElement::step(Tasklet& t, uint32_t index) {
    if (t.retire_ticket) {
        pad_->retire(t.retire_ticket);
        t.retire_ticket = 0;
    }
    const Action& action = t.program[t.pc];
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, op::SetTransferSize>) {
                if (engine_->set_transfer_size(a.bytes) == 0) {
                    ++t.pc;
                    return;
                }
                issue_burst(t, index, 1, false);
                ++t.pc;
                t.progress = 0;
            } else if constexpr (std::is_same_v<T, op::Compute>) {
                if (t.progress == 0) apply_access(a.access, cycle_);
                if (a.instructions == 0) {
                    ++t.pc;
                    return;
                }
                issue_burst(t, index, a.instructions - t.progress, true);
                if (t.progress == a.instructions) {
                    ++t.pc;
                    t.progress = 0;
                }
            } else if constexpr (std::is_same_v<T, op::Preload> || std::is_same_v<T, op::Unload>) {
                constexpr DmaDirection dir = std::is_same_v<T, op::Preload> ? DmaDirection::Preload
                                                                           : DmaDirection::Unload;
                const uint32_t overhead = engine_->issue_overhead(dir);
                if (t.progress < overhead) issue_burst(t, index, overhead - t.progress, false);
                if (t.progress == overhead) {
                    t.progress = 0;
                    t.submit_pending = true;
                    t.submit_cycle = cycle_;
                }
            } else if constexpr (std::is_same_v<T, op::Wait>) {
                if (a.reuse_status && known_satisfied(t, a.kind, a.at_most)) {
                    ++t.pc;
                    return;
                }
                const uint64_t sample = cycle_ + 1;
                const SimTime ready = engine_->time_when_at_most(
                    a.kind, a.at_most, SimTime::from_ps(time_ps(sample)), scope(index));
                if (ready.ps() <= time_ps(sample)) {
                    issue_burst(t, index, 1, false);
                    t.progress = 0;
                    record_poll(t, index, sample);
                    ++t.pc;
                } else {
                    // Spin until the first poll whose sample point sees the condition.
                    t.blocked_until = cycles_ceil(ready.ps(), cycle_ps_) - 1;
                }
            } else if constexpr (std::is_same_v<T, op::Status>) {
                const uint64_t sample = cycle_ + 1;
                issue_burst(t, index, 1, false);
                t.progress = 0;
                record_poll(t, index, sample);
                ++t.pc;
            }
        },
        action);
}

void ProcessingElement::issue_burst(Tasklet& t, uint32_t index, uint64_t remaining, bool compute) {
    const uint64_t depth = profile_.pipeline_depth;
    // Issue back-to-back (every `depth` cycles) while no other tasklet could
    // claim one of those cycles.
    uint64_t others = kNever;
    for (uint32_t j = 0; j < tasklets_.size(); ++j) {
        if (j == index || tasklets_[j].done()) continue;
        others = std::min(others, wake_cycle(tasklets_[j]));
    }
    uint64_t m = remaining;
    if (others != kNever) {
        const uint64_t room = others > cycle_ ? (others - cycle_ + depth - 1) / depth : 1;
        m = std::max<uint64_t>(1, std::min(remaining, room));
    }
    const uint64_t last = cycle_ + (m - 1) * depth;
    if (compute) {
        stats_.compute_cycles += m;
        stats_.instructions_retired += m;
        t.stats.instructions += m;
    } else {
        stats_.issue_cycles += m;
        t.stats.issue_slots += m;
    }
    stats_.idle_cycles += (m - 1) * (depth - 1);
    t.progress += m;
    t.next_issue = last + depth;
    cycle_ = last + 1;
}

void ProcessingElement::submit(Tasklet& t, uint32_t index) {
    const SimTime now = SimTime::from_ps(time_ps(cycle_));
    const Action& action = t.program[t.pc];
    DmaDirection dir;
    uint64_t addr;
    uint32_t offset;
    uint32_t size;
    if (const auto* p = std::get_if<op::Preload>(&action)) {
        dir = DmaDirection::Preload;
        addr = p->main_addr;
        offset = p->pad_offset;
        size = engine_->transfer_size() ? engine_->transfer_size()
                                        : engine_->config().default_transfer_size;
    } else {
        const auto& u = std::get<op::Unload>(action);
        dir = DmaDirection::Unload;
        addr = u.main_addr;
        offset = u.pad_offset;
        size = u.size_bytes;
    }
    if (engine_->fifo_full(dir, now)) {
        // Back-pressure: retry when the oldest request frees its slot.
        t.submit_cycle = cycles_ceil(engine_->oldest_completion(dir, now).ps(), cycle_ps_);
        return;
    }
    const TransferTicket ticket = engine_->submit(dir, addr, offset, size, now, index);
    ++t.issued[dir_index(dir)];
    // The enqueue handshake reports FIFO occupancy, which is the status register.
    record_poll(t, index, cycle_);
    t.submit_pending = false;
    ++t.pc;
    if (profile_.blocking_dma()) {
        t.blocked_until =
            std::max(t.blocked_until, cycles_ceil(ticket.completion_time.ps(), cycle_ps_));
        t.retire_ticket = ticket.id;
    }
}

void ProcessingElement::apply_access(const PadAccess& access, uint64_t cycle) {
    const SimTime now = SimTime::from_ps(time_ps(cycle));
    switch (access.kind) {
        case PadAccess::Kind::None:
            return;
        case PadAccess::Kind::Read: {
            auto bytes = pad_->read(access.offset, access.len, now);
            for (size_t w = 0; w + Scratchpad::kWordBytes <= bytes.size(); w += Scratchpad::kWordBytes) {
                uint64_t v = 0;
                std::memcpy(&v, bytes.data() + w, sizeof v);
                stats_.value_sum += v;
            }
            return;
        }
        case PadAccess::Kind::Write:
            pad_->check_write(access.offset, access.len, now);
            if (pad_->keeps_values()) {
                for (uint32_t w = 0; w < access.len; w += Scratchpad::kWordBytes) {
                    pad_->write_word(access.offset + w, access.value, now);
                }
            }
            return;
        case PadAccess::Kind::SetBit: {
            pad_->check_read(access.offset, Scratchpad::kWordBytes, now);
            pad_->check_write(access.offset, Scratchpad::kWordBytes, now);
            if (pad_->keeps_values()) {
                const uint64_t word = pad_->read_word(access.offset, now);
                pad_->write_word(access.offset, word | (uint64_t{1} << (access.value % 64)), now);
            }
            return;
        }
    }
}

bool ProcessingElement::known_satisfied(const Tasklet& t, WaitKind kind, uint32_t at_most) const {
    uint64_t upper = 0;
    for (DmaDirection d : {DmaDirection::Preload, DmaDirection::Unload}) {
        if (kind == WaitKind::Preloads && d != DmaDirection::Preload) continue;
        if (kind == WaitKind::Unloads && d != DmaDirection::Unload) continue;
        const auto& k = t.known[dir_index(d)];
        const uint64_t known_done = k.issued_at_poll - k.pending_at_poll;
        upper += t.issued[dir_index(d)] - known_done;
    }
    return upper <= at_most;
}

void ProcessingElement::record_poll(Tasklet& t, uint32_t index, uint64_t sample_cycle) {
    const PulStatus st = engine_->sample_status(SimTime::from_ps(time_ps(sample_cycle)), scope(index));
    t.known[0] = {t.issued[0], st.preloads_pending};
    t.known[1] = {t.issued[1], st.unloads_pending};
}

void ProcessingElement::finish() {
    uint64_t end = cycle_;
    for (auto& t : tasklets_) end = std::max(end, t.next_issue);
    stats_.idle_cycles += end - cycle_;
    cycle_ = end;
    stats_.total_cycles = end;
    stats_.finish_time = SimTime::from_ps(time_ps(end));
    for (size_t i = 0; i < tasklets_.size(); ++i) {
        tasklets_[i].stats.finish_cycle = tasklets_[i].next_issue;
        stats_.per_tasklet[i] = tasklets_[i].stats;
    }
    finished_ = true;
    const uint64_t sum =
        stats_.compute_cycles + stats_.issue_cycles + stats_.stall_cycles + stats_.idle_cycles;
    if (sum != stats_.total_cycles) {
        throw std::logic_error("PE " + std::to_string(id_) + " cycle buckets sum to " +
                               std::to_string(sum) + ", total " + std::to_string(stats_.total_cycles));
    }
}

}  // namespace pulsim
