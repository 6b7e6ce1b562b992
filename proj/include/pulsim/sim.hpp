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

/**
 * @file sim.hpp
 * @brief Deterministic discrete-event engine.
 *
 * Time is kept as integer picoseconds so that PEs clocked at different
 * frequencies (150 MHz, 350 MHz) and nanosecond memory latencies order
 * exactly. Events at the same instant dispatch in insertion order.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <queue>
#include <string>
#include <unordered_set>
#include <vector>

namespace pulsim {

class SimTime {
public:
    constexpr SimTime() = default;

    static constexpr SimTime from_ps(uint64_t ps) { return SimTime(ps); }
    static constexpr SimTime from_ns(uint64_t ns) { return SimTime(ns * 1000); }

    constexpr uint64_t ps() const { return ps_; }
    /// Whole nanoseconds, truncated.
    constexpr uint64_t nanos() const { return ps_ / 1000; }
    constexpr double ns() const { return static_cast<double>(ps_) / 1000.0; }

    constexpr SimTime operator+(SimTime o) const { return SimTime(ps_ + o.ps_); }
    constexpr SimTime operator-(SimTime o) const { return SimTime(ps_ - o.ps_); }
    constexpr auto operator<=>(const SimTime&) const = default;

private:
    constexpr explicit SimTime(uint64_t ps) : ps_(ps) {}
    uint64_t ps_ = 0;
};

/// Duration of one clock cycle at `freq_mhz`, rounded to the nearest picosecond.
constexpr uint64_t cycle_period_ps(uint64_t freq_mhz) {
    return (1'000'000 + freq_mhz / 2) / freq_mhz;
}

/// Smallest whole number of `period_ps` cycles covering `span_ps`.
constexpr uint64_t cycles_ceil(uint64_t span_ps, uint64_t period_ps) {
    return (span_ps + period_ps - 1) / period_ps;
}

using HandlerId = uint32_t;
using EventHandle = uint64_t;

struct Event {
    SimTime fire_at;
    uint64_t seq = 0;
    HandlerId target = 0;
    uint32_t kind = 0;
    uint64_t payload = 0;
};

class Simulator {
public:
    using Handler = std::function<void(Simulator&, const Event&)>;

    static constexpr uint64_t kDefaultEventLimit = 1'000'000'000;

    Simulator() = default;
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;
    Simulator(Simulator&&) = default;
    Simulator& operator=(Simulator&&) = default;

    /// Registers a handler; `name` appears in the event trace.
    HandlerId add_handler(std::string name, Handler handler);

    /// Queues an event. Throws SchedulingInPast if `at` precedes the clock.
    EventHandle schedule(SimTime at, HandlerId target, uint32_t kind = 0, uint64_t payload = 0);
    EventHandle schedule(const Event& event);

    /// Returns false if the event already fired or was cancelled.
    bool cancel(EventHandle handle);

    /// Dispatches everything in (fire_at, seq) order; returns the final clock.
    SimTime run_until_idle();

    SimTime now() const { return now_; }
    size_t queue_depth() const { return live_.size(); }
    uint64_t dispatched() const { return dispatched_; }

    void set_event_limit(uint64_t limit) { event_limit_ = limit; }

    /// Event trace sink: one `time_ns,seq,target,kind` line per dispatch.
    void set_trace(std::ostream* out) { trace_ = out; }
    void set_kind_names(std::vector<std::string> names) { kind_names_ = std::move(names); }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::unordered_set<uint64_t> live_;
    std::unordered_set<uint64_t> cancelled_;
    std::vector<std::string> handler_names_;
    std::vector<Handler> handlers_;
    std::vector<std::string> kind_names_;
    SimTime now_;
    uint64_t next_seq_ = 1;
    uint64_t dispatched_ = 0;
    uint64_t event_limit_ = kDefaultEventLimit;
    std::ostream* trace_ = nullptr;
};

}  // namespace pulsim
