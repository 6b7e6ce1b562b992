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
#include <string_view>

#include "pulsim/sim.hpp"

namespace pulsim {

enum class DmaDirection : uint8_t {
    Preload,  ///< main memory -> scratchpad (device read)
    Unload,   ///< scratchpad -> main memory (device write)
};

constexpr std::string_view to_string(DmaDirection d) {
    return d == DmaDirection::Preload ? "preload" : "unload";
}

/// One transfer handed to the DMA engine. Sizes are multiples of the 8-byte word.
struct DmaRequest {
    DmaDirection direction = DmaDirection::Preload;
    uint64_t main_addr = 0;
    uint32_t pad_offset = 0;
    uint32_t size_bytes = 0;
    SimTime enqueued_at;
};

}  // namespace pulsim
