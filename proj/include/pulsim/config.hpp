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
#include <optional>
#include <string>
#include <vector>

#include "pulsim/analysis.hpp"
#include "pulsim/error.hpp"
#include "pulsim/system.hpp"

namespace pulsim {

/// One point of an expanded sweep.
struct RunPoint {
    std::string group;
    std::string label;  ///< "axis=value ..." of the sweep coordinates
    uint32_t line = 0;  ///< 1-based line of the group (or base) the point came from
    SystemConfig config;
};

struct Experiment {
    std::string name;
    std::string description;
    std::vector<RunPoint> points;
};

/// Parses a run configuration and expands groups and sweeps in order:
/// groups as listed, then the cartesian product of sweep axes with axis
/// names in sorted order (last axis varies fastest). Throws Error with
/// ConfigInvalid and a "source:line:col:" prefix on any schema violation.
Experiment load_experiment(const std::string& yaml_text, const std::string& source = "<config>");
Experiment load_experiment_file(const std::string& path);

/// Axis names accepted under `sweep:`.
const std::vector<std::string>& sweep_axes();

struct Preset {
    std::string name;
    std::string description;
    std::string yaml;
};

const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

/// Stable CSV schema: header row plus one row per run.
std::string csv_header();
std::string csv_row(size_t run, const RunPoint& point, const MetricsReport& report);

/// Full per-run report as a JSON object (serialized).
std::string json_report(const Experiment& experiment, const std::vector<MetricsReport>& reports);

/// Runs every point, `threads` at a time; results are in point order.
/// When `trace_dir` is set each run dumps its event trace there.
std::vector<MetricsReport> run_experiment(const Experiment& experiment, unsigned threads = 1,
                                          const std::optional<std::string>& trace_dir = {});

}  // namespace pulsim
