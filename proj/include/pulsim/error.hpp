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

#include <stdexcept>
#include <string>
#include <string_view>

namespace pulsim {

/// Every failure the simulator can raise. Configuration errors map to CLI
/// exit code 2, model errors (hazards, overflow, livelock) to exit code 1.
enum class ErrorCode {
    // sim-core
    SchedulingInPast,
    EventLimitExceeded,
    // memory
    ZeroSizeTransfer,
    AddressOutOfRange,
    EmptyWindow,
    // scratchpad
    OutOfBounds,
    ReadDuringPendingPreload,
    WriteDuringPendingUnload,
    DmaOverlapsPendingRegion,
    // pul-engine
    InvalidTransferSize,
    // pe
    UnknownTasklet,
    ScratchpadOverflow,
    // workloads
    InvalidRegion,
    RowTooLarge,
    InvalidKernel,
    // analysis
    WorkMismatch,
    NotSaturable,
    // cli
    ConfigInvalid,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::SchedulingInPast: return "SchedulingInPast";
        case ErrorCode::EventLimitExceeded: return "EventLimitExceeded";
        case ErrorCode::ZeroSizeTransfer: return "ZeroSizeTransfer";
        case ErrorCode::AddressOutOfRange: return "AddressOutOfRange";
        case ErrorCode::EmptyWindow: return "EmptyWindow";
        case ErrorCode::OutOfBounds: return "OutOfBounds";
        case ErrorCode::ReadDuringPendingPreload: return "ReadDuringPendingPreload";
        case ErrorCode::WriteDuringPendingUnload: return "WriteDuringPendingUnload";
        case ErrorCode::DmaOverlapsPendingRegion: return "DmaOverlapsPendingRegion";
        case ErrorCode::InvalidTransferSize: return "InvalidTransferSize";
        case ErrorCode::UnknownTasklet: return "UnknownTasklet";
        case ErrorCode::ScratchpadOverflow: return "ScratchpadOverflow";
        case ErrorCode::InvalidRegion: return "InvalidRegion";
        case ErrorCode::RowTooLarge: return "RowTooLarge";
        case ErrorCode::InvalidKernel: return "InvalidKernel";
        case ErrorCode::WorkMismatch: return "WorkMismatch";
        case ErrorCode::NotSaturable: return "NotSaturable";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    }
    return "Unknown";
}

/// True for errors caused by bad user input rather than by the simulated model.
constexpr bool is_config_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConfigInvalid:
        case ErrorCode::InvalidTransferSize:
        case ErrorCode::InvalidRegion:
        case ErrorCode::InvalidKernel:
        case ErrorCode::RowTooLarge:
        case ErrorCode::AddressOutOfRange:
        case ErrorCode::ZeroSizeTransfer:
            return true;
        default:
            return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

    ErrorCode code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace pulsim
