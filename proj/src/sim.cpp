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

#include "pulsim/sim.hpp"

#include <ostream>

#include "pulsim/error.hpp"

namespace pulsim {

HandlerId Simulator::add_handler(std::string name, Handler handler) {
    handler_names_.push_back(std::move(name));
    handlers_.push_back(std::move(handler));
    return static_cast<HandlerId>(handlers_.size() - 1);
}

EventHandle Simulator::schedule(SimTime at, HandlerId target, uint32_t kind, uint64_t payload) {
    Event ev;
    ev.fire_at = at;
    ev.target = target;
    ev.kind = kind;
    ev.payload = payload;
    return schedule(ev);
}

EventHandle Simulator::schedule(const Event& event) {
    if (event.fire_at < now_) {
        throw Error(ErrorCode::SchedulingInPast,
                    "event at " + std::to_string(event.fire_at.ps()) + " ps, clock at " +
                        std::to_string(now_.ps()) + " ps");
    }
    Event ev = event;
    ev.seq = next_seq_++;
    queue_.push(ev);
    live_.insert(ev.seq);
    return ev.seq;
}

bool Simulator::cancel(EventHandle handle) {
    if (live_.erase(handle) == 0) return false;
    cancelled_.insert(handle);
    return true;
}

SimTime Simulator::run_until_idle() {
    while (!queue_.empty()) {
        Event ev = queue_.top();
        queue_.pop();
        if (auto it = cancelled_.find(ev.seq); it != cancelled_.end()) {
            cancelled_.erase(it);
            continue;
        }
        live_.erase(ev.seq);
        if (dispatched_ >= event_limit_) {
            throw Error(ErrorCode::EventLimitExceeded,
                        "dispatched " + std::to_string(dispatched_) + " events");
        }
        now_ = ev.fire_at;
        ++dispatched_;
        if (trace_) {
            *trace_ << now_.nanos() << ',' << ev.seq << ',' << handler_names_.at(ev.target) << ',';
            if (ev.kind < kind_names_.size()) {
                *trace_ << kind_names_[ev.kind];
            } else {
                *trace_ << ev.kind;
            }
            *trace_ << '\n';
        }
        handlers_.at(ev.target)(*this, ev);
    }
    return now_;
}

}  // namespace pulsim
