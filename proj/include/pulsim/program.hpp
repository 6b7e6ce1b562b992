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
#include <variant>
#include <vector>

#include "pulsim/pul_engine.hpp"

namespace pulsim {

/// Scratchpad side effect attached to a compute step.
struct PadAccess {
    enum class Kind : uint8_t { None, Read, Write, SetBit };
    Kind kind = Kind::None;
    uint32_t offset = 0;
    uint32_t len = 0;      ///< bytes; Read sums `len / 8` words into the PE accumulator
    uint64_t value = 0;    ///< Write: value stored in every word; SetBit: bit index
};

// The instruction-level vocabulary a kernel program is written in.
namespace op {

struct SetTransferSize {
    uint32_t bytes;
};

struct Preload {
    uint64_t main_addr;
    uint32_t pad_offset;
};

struct Unload {
    uint32_t pad_offset;
    uint64_t main_addr;
    uint32_t size_bytes;
};

/// Polls the status register until at most `at_most` requests of `kind`
/// remain pending. With `reuse_status` the poll is skipped when an earlier
/// status read already proves the condition.
struct Wait {
    WaitKind kind = WaitKind::All;
    uint32_t at_most = 0;
    bool reuse_status = false;
};

struct Status {};

struct Compute {
    uint64_t instructions = 0;
    PadAccess access;
};

}  // namespace op

using Action = std::variant<op::SetTransferSize, op::Preload, op::Unload, op::Wait, op::Status,
                            op::Compute>;

/// Straight-line action list executed by one tasklet.
using Program = std::vector<Action>;

}  // namespace pulsim
