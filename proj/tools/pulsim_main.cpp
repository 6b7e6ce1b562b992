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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "pulsim/config.hpp"

namespace fs = std::filesystem;
using namespace pulsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitModel = 1;
constexpr int kExitConfig = 2;

struct Options {
    std::string file;
    std::string preset;
    std::string out;
    bool trace = false;
    bool json = false;
    unsigned threads = 1;
    std::optional<uint64_t> seed;
};

int run(const Options& opt) {
    Experiment ex;
    try {
        if (!opt.preset.empty()) {
            const Preset* p = find_preset(opt.preset);
            if (!p) {
                std::cerr << "unknown preset '" << opt.preset << "' (see list-presets)\n";
                return kExitConfig;
            }
            ex = load_experiment(p->yaml, "preset:" + p->name);
        } else {
            ex = load_experiment_file(opt.file);
        }
    } catch (const Error& e) {
        std::cerr << "config error: " << e.detail() << "\n";
        return kExitConfig;
    }
    if (opt.seed) {
        for (auto& p : ex.points) p.config.seed = *opt.seed;
    }

    std::string out = opt.out;
    if (out.empty()) {
        const char* env = std::getenv("PULSIM_OUT");
        out = env && *env ? env : ".";
    }
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
        std::cerr << "cannot create output directory " << out << ": " << ec.message() << "\n";
        return kExitConfig;
    }

    std::vector<MetricsReport> reports;
    try {
        reports = run_experiment(ex, opt.threads, opt.trace ? std::optional<std::string>(out)
                                                             : std::nullopt);
    } catch (const Error& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return is_config_error(e.code()) ? kExitConfig : kExitModel;
    } catch (const std::exception& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return kExitModel;
    }

    const fs::path csv_path = fs::path(out) / (ex.name + ".csv");
    std::ofstream csv(csv_path, std::ios::binary);
    csv << csv_header();
    for (size_t i = 0; i < reports.size(); ++i) csv << csv_row(i, ex.points[i], reports[i]);
    if (!csv) {
        std::cerr << "failed writing " << csv_path << "\n";
        return kExitModel;
    }
    std::cout << ex.name << ": " << reports.size() << " runs -> " << csv_path.string() << "\n";
    if (opt.json) {
        const fs::path json_path = fs::path(out) / (ex.name + ".json");
        std::ofstream(json_path, std::ios::binary) << json_report(ex, reports);
        std::cout << ex.name << ": report -> " << json_path.string() << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pulsim: preload/unload DMA simulator for near-data and in-memory processing"};
    app.require_subcommand(1);

    Options opt;
    auto* run_cmd = app.add_subcommand("run", "run a configuration file or a preset");
    run_cmd->add_option("file", opt.file, "YAML run configuration");
    run_cmd->add_option("--preset", opt.preset, "built-in experiment preset");
    run_cmd->add_option("--out", opt.out, "output directory (default: $PULSIM_OUT or .)");
    run_cmd->add_flag("--trace", opt.trace, "dump the event trace of every run");
    run_cmd->add_flag("--json", opt.json, "also write the full per-run JSON report");
    run_cmd->add_option("--threads", opt.threads, "independent runs in parallel")
        ->check(CLI::Range(1u, 1024u));
    run_cmd->add_option("--seed", opt.seed, "override the seed of every run");

    auto* list_cmd = app.add_subcommand("list-presets", "list the experiment presets");
    std::string show;
    auto* show_cmd = app.add_subcommand("show-preset", "print a preset's YAML");
    show_cmd->add_option("name", show)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (*list_cmd) {
        for (const auto& p : presets()) std::cout << p.name << "\t" << p.description << "\n";
        return kExitOk;
    }
    if (*show_cmd) {
        const Preset* p = find_preset(show);
        if (!p) {
            std::cerr << "unknown preset '" << show << "'\n";
            return kExitConfig;
        }
        std::cout << p->yaml;
        return kExitOk;
    }
    if (opt.file.empty() == opt.preset.empty()) {
        std::cerr << "run needs exactly one of <file> or --preset\n";
        return kExitConfig;
    }
    return run(opt);
}
