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

#include "pulsim/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace pulsim {

namespace {

struct Ctx {
    std::string source;

    std::string at(const YAML::Mark& m) const {
        if (m.is_null()) return source + ": ";
        return source + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1) + ": ";
    }
    [[noreturn]] void fail(const YAML::Node& n, const std::string& msg) const {
        throw Error(ErrorCode::ConfigInvalid, at(n.Mark()) + msg);
    }
};

const std::set<std::string> kTopKeys = {"name", "description", "base", "sweep", "groups"};
const std::set<std::string> kRunKeys = {"pe", "pe_count", "device", "channel", "engine",
                                        "pad_capacity", "trace_region", "mode", "seed", "kernel"};
const std::set<std::string> kPeKeys = {"kind", "freq_mhz", "pipeline_depth", "max_tasklets",
                                       "tasklets"};
const std::set<std::string> kDeviceKeys = {"profile", "label", "read_latency_ns", "write_latency_ns"};
const std::set<std::string> kChannelKeys = {"profile", "label", "bandwidth_bytes_per_sec",
                                            "bandwidth_gib_per_sec"};
const std::set<std::string> kEngineKeys = {"fifo_depth", "issue_overhead_cycles_preload",
                                           "issue_overhead_cycles_unload", "default_transfer_size"};
const std::set<std::string> kKernelKeys = {
    "kind",          "elements",        "intensity",     "addr_gen_instr",  "strategy",
    "distance",      "transfer_size",   "writeback",     "attribute_count", "per_attribute_instr",
    "selectivity",   "materialization", "compare_instr", "bitvector_instr", "flush_threshold",
    "flush_method",  "update_instr",    "db_op"};

// Where each sweep axis lands in the run tree.
const std::map<std::string, std::vector<std::string>> kAxisPath = {
    {"attribute_count", {"kernel", "attribute_count"}},
    {"channel", {"channel"}},
    {"device", {"device"}},
    {"distance", {"kernel", "distance"}},
    {"elements", {"kernel", "elements"}},
    {"flush_method", {"kernel", "flush_method"}},
    {"flush_threshold", {"kernel", "flush_threshold"}},
    {"intensity", {"kernel", "intensity"}},
    {"kernel", {"kernel", "kind"}},
    {"materialization", {"kernel", "materialization"}},
    {"pe_count", {"pe_count"}},
    {"seed", {"seed"}},
    {"selectivity", {"kernel", "selectivity"}},
    {"strategy", {"kernel", "strategy"}},
    {"tasklets", {"pe", "tasklets"}},
    {"transfer_size", {"kernel", "transfer_size"}},
};

void check_keys(const Ctx& ctx, const YAML::Node& map, const std::set<std::string>& allowed,
                const char* where) {
    if (!map.IsMap()) ctx.fail(map, std::string(where) + " must be a mapping");
    for (const auto& kv : map) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) ctx.fail(kv.first, "unknown key '" + key + "' in " + where);
    }
}

uint64_t get_uint(const Ctx& ctx, const YAML::Node& n, uint64_t max = std::numeric_limits<uint32_t>::max()) {
    if (!n.IsScalar()) ctx.fail(n, "expected an unsigned integer");
    const std::string s = n.Scalar();
    if (s.empty() || s.find_first_not_of("0123456789_") != std::string::npos) {
        ctx.fail(n, "expected an unsigned integer, got '" + s + "'");
    }
    unsigned __int128 v = 0;
    for (char ch : s) {
        if (ch == '_') continue;
        v = v * 10 + static_cast<unsigned>(ch - '0');
        if (v > max) ctx.fail(n, "value " + s + " exceeds " + std::to_string(max));
    }
    return static_cast<uint64_t>(v);
}

double get_double(const Ctx& ctx, const YAML::Node& n) {
    try {
        return n.as<double>();
    } catch (const YAML::Exception&) {
        ctx.fail(n, "expected a number");
    }
}

bool get_bool(const Ctx& ctx, const YAML::Node& n) {
    try {
        return n.as<bool>();
    } catch (const YAML::Exception&) {
        ctx.fail(n, "expected true or false");
    }
}

std::string get_string(const Ctx& ctx, const YAML::Node& n) {
    if (!n.IsScalar()) ctx.fail(n, "expected a string");
    return n.Scalar();
}

// Settings resolved through a stack of mappings, most specific first.
struct Layers {
    std::vector<YAML::Node> maps;

    YAML::Node find(const std::string& key, size_t* index = nullptr) const {
        for (size_t i = 0; i < maps.size(); ++i) {
            const YAML::Node& m = maps[i];
            if (m.IsMap() && m[key]) {
                if (index) *index = i;
                return m[key];
            }
        }
        return YAML::Node(YAML::NodeType::Undefined);
    }

    // Nested section. A scalar names a built-in profile and hides every
    // less specific layer.
    Layers section(const Ctx& ctx, const std::string& key, const std::set<std::string>& allowed,
                   YAML::Node* name) const {
        Layers out;
        for (const YAML::Node& m : maps) {
            if (!m.IsMap() || !m[key]) continue;
            const YAML::Node n = m[key];
            if (n.IsScalar()) {
                *name = n;
                break;
            }
            check_keys(ctx, n, allowed, key.c_str());
            out.maps.push_back(n);
        }
        return out;
    }
};

PeProfile build_pe(const Ctx& ctx, const Layers& run) {
    YAML::Node name(YAML::NodeType::Undefined);
    const Layers pe = run.section(ctx, "pe", kPeKeys, &name);
    YAML::Node kind_node = pe.find("kind");
    if (!kind_node) kind_node = name;
    std::string kind = kind_node ? get_string(ctx, kind_node) : "ndp";
    PeProfile p;
    if (kind == "ndp") {
        p = PeProfile::ndp();
    } else if (kind == "pim") {
        p = PeProfile::pim();
    } else {
        ctx.fail(kind_node, "unknown pe kind '" + kind + "' (ndp|pim)");
    }
    if (auto n = pe.find("freq_mhz")) p.freq_mhz = static_cast<uint32_t>(get_uint(ctx, n));
    if (auto n = pe.find("pipeline_depth")) p.pipeline_depth = static_cast<uint32_t>(get_uint(ctx, n));
    if (auto n = pe.find("max_tasklets")) p.max_tasklets = static_cast<uint32_t>(get_uint(ctx, n));
    if (auto n = pe.find("tasklets")) p.tasklets = static_cast<uint32_t>(get_uint(ctx, n));
    return p;
}

DeviceProfile build_device(const Ctx& ctx, const Layers& run) {
    YAML::Node name(YAML::NodeType::Undefined);
    const Layers dev = run.section(ctx, "device", kDeviceKeys, &name);
    YAML::Node profile = dev.find("profile");
    if (!profile) profile = name;
    DeviceProfile d = DeviceProfile::nvm();
    if (profile) {
        try {
            d = DeviceProfile::by_name(get_string(ctx, profile));
        } catch (const Error& e) {
            ctx.fail(profile, e.detail() + " (dram|nvm)");
        }
    }
    bool custom = false;
    if (auto n = dev.find("read_latency_ns")) d.read_latency_ns = get_uint(ctx, n, 1'000'000'000), custom = true;
    if (auto n = dev.find("write_latency_ns")) d.write_latency_ns = get_uint(ctx, n, 1'000'000'000), custom = true;
    if (auto n = dev.find("label")) {
        d.label = get_string(ctx, n);
    } else if (custom) {
        d.label += "_custom";
    }
    return d;
}

ChannelProfile build_channel(const Ctx& ctx, const Layers& run) {
    YAML::Node name(YAML::NodeType::Undefined);
    const Layers ch = run.section(ctx, "channel", kChannelKeys, &name);
    YAML::Node profile = ch.find("profile");
    if (!profile) profile = name;
    ChannelProfile c = ChannelProfile::system();
    if (profile) {
        try {
            c = ChannelProfile::by_name(get_string(ctx, profile));
        } catch (const Error& e) {
            ctx.fail(profile, e.detail() + " (system|upmem_mram|upmem_calibrated)");
        }
    }
    bool custom = false;
    if (auto n = ch.find("bandwidth_bytes_per_sec")) {
        c.bandwidth_bytes_per_sec = get_uint(ctx, n, uint64_t{1} << 50);
        custom = true;
    } else if (auto g = ch.find("bandwidth_gib_per_sec")) {
        const double gib = get_double(ctx, g);
        if (!(gib > 0.0 && gib < 1e6)) ctx.fail(g, "bandwidth must be positive");
        c.bandwidth_bytes_per_sec = static_cast<uint64_t>(gib * ChannelProfile::kGiB);
        custom = true;
    }
    if (auto n = ch.find("label")) {
        c.label = get_string(ctx, n);
    } else if (custom) {
        c.label += "_custom";
    }
    return c;
}

PulEngineConfig build_engine(const Ctx& ctx, const Layers& run) {
    YAML::Node name(YAML::NodeType::Undefined);
    const Layers en = run.section(ctx, "engine", kEngineKeys, &name);
    if (name) ctx.fail(name, "engine must be a mapping");
    PulEngineConfig e;
    if (auto n = en.find("fifo_depth")) e.fifo_depth = static_cast<uint32_t>(get_uint(ctx, n));
    if (auto n = en.find("issue_overhead_cycles_preload")) e.issue_overhead_preload = static_cast<uint32_t>(get_uint(ctx, n));
    if (auto n = en.find("issue_overhead_cycles_unload")) e.issue_overhead_unload = static_cast<uint32_t>(get_uint(ctx, n));
    if (auto n = en.find("default_transfer_size")) e.default_transfer_size = static_cast<uint32_t>(get_uint(ctx, n));
    return e;
}

template <typename F>
auto parse_enum(const Ctx& ctx, const YAML::Node& n, F&& parse) {
    try {
        return parse(get_string(ctx, n));
    } catch (const Error& e) {
        ctx.fail(n, e.detail());
    }
}

KernelSpec build_kernel_spec(const Ctx& ctx, const Layers& run) {
    YAML::Node name(YAML::NodeType::Undefined);
    const Layers kl = run.section(ctx, "kernel", kKernelKeys, &name);
    KernelSpec k;
    YAML::Node kind = kl.find("kind");
    if (!kind) kind = name;
    if (kind) k.kind = parse_enum(ctx, kind, parse_kernel_kind);
    auto u32 = [&](const char* key, uint32_t& field) {
        if (auto n = kl.find(key)) field = static_cast<uint32_t>(get_uint(ctx, n));
    };
    if (auto n = kl.find("elements")) k.elements = get_uint(ctx, n, uint64_t{1} << 32);
    u32("intensity", k.intensity_instr_per_elem);
    u32("addr_gen_instr", k.addr_gen_instr);
    u32("distance", k.distance);
    u32("transfer_size", k.transfer_size);
    u32("attribute_count", k.attribute_count);
    u32("per_attribute_instr", k.per_attribute_instr);
    u32("compare_instr", k.compare_instr);
    u32("bitvector_instr", k.bitvector_instr);
    u32("flush_threshold", k.flush_threshold);
    u32("update_instr", k.update_instr);
    if (auto n = kl.find("strategy")) k.strategy = parse_enum(ctx, n, parse_strategy);
    if (auto n = kl.find("materialization")) k.materialization = parse_enum(ctx, n, parse_materialization);
    if (auto n = kl.find("flush_method")) k.flush_method = parse_enum(ctx, n, parse_flush_method);
    if (auto n = kl.find("writeback")) k.writeback = get_bool(ctx, n);
    if (auto n = kl.find("selectivity")) k.selectivity = get_double(ctx, n);

    size_t op_layer = 0;
    size_t intensity_layer = 0;
    const YAML::Node op = kl.find("db_op", &op_layer);
    const YAML::Node intensity = kl.find("intensity", &intensity_layer);
    if (op && (!intensity || op_layer < intensity_layer)) {
        try {
            k.intensity_instr_per_elem = db_op(get_string(ctx, op)).instr_per_record;
        } catch (const Error& e) {
            ctx.fail(op, e.detail());
        }
    }
    return k;
}

SystemConfig build_config(const Ctx& ctx, const Layers& run) {
    SystemConfig c;
    c.pe = build_pe(ctx, run);
    c.device = build_device(ctx, run);
    c.channel = build_channel(ctx, run);
    c.engine = build_engine(ctx, run);
    c.kernel = build_kernel_spec(ctx, run);
    if (auto n = run.find("pe_count")) c.pe_count = static_cast<uint32_t>(get_uint(ctx, n, 4096));
    if (auto n = run.find("pad_capacity")) c.pad_capacity = static_cast<uint32_t>(get_uint(ctx, n));
    if (auto n = run.find("trace_region")) c.trace_region = get_uint(ctx, n, uint64_t{1} << 40);
    if (auto n = run.find("seed")) c.seed = get_uint(ctx, n, std::numeric_limits<uint64_t>::max());
    if (auto n = run.find("mode")) {
        const std::string mode = get_string(ctx, n);
        if (mode == "value-check") {
            c.value_check = true;
        } else if (mode != "timing") {
            ctx.fail(n, "unknown mode '" + mode + "' (timing|value-check)");
        }
    }
    return c;
}

// Axis name -> value list, group axes replacing base axes of the same name.
std::map<std::string, YAML::Node> merge_sweeps(const Ctx& ctx, const std::vector<YAML::Node>& sweeps) {
    std::map<std::string, YAML::Node> axes;
    for (const YAML::Node& s : sweeps) {
        if (!s) continue;
        if (!s.IsMap()) ctx.fail(s, "sweep must be a mapping of axis: [values]");
        for (const auto& kv : s) {
            const auto axis = kv.first.as<std::string>();
            if (!kAxisPath.count(axis)) {
                std::string known;
                for (const auto& [k, _] : kAxisPath) known += (known.empty() ? "" : ", ") + k;
                ctx.fail(kv.first, "unknown sweep axis '" + axis + "' (" + known + ")");
            }
            const YAML::Node values = kv.second;
            if (!values.IsSequence()) ctx.fail(values, "sweep axis '" + axis + "' must be a list");
            if (values.size() == 0) ctx.fail(values, "sweep axis '" + axis + "' is empty");
            axes[axis] = values;
        }
    }
    return axes;
}

void expand(const Ctx& ctx, const std::string& group, const YAML::Node& anchor,
            const std::vector<YAML::Node>& layers, const std::map<std::string, YAML::Node>& axes,
            std::vector<RunPoint>& out) {
    std::vector<std::pair<std::string, YAML::Node>> dims(axes.begin(), axes.end());
    std::vector<size_t> idx(dims.size(), 0);
    for (;;) {
        YAML::Node overlay(YAML::NodeType::Map);
        std::string label;
        for (size_t i = 0; i < dims.size(); ++i) {
            const YAML::Node value = dims[i].second[idx[i]];
            const auto& path = kAxisPath.at(dims[i].first);
            if (path.size() == 1) {
                overlay[path[0]] = value;
            } else {
                if (!overlay[path[0]]) overlay[path[0]] = YAML::Node(YAML::NodeType::Map);
                overlay[path[0]][path[1]] = value;
            }
            if (!value.IsScalar()) ctx.fail(value, "sweep values must be scalars");
            label += (label.empty() ? "" : ";") + dims[i].first + "=" + value.Scalar();
        }
        Layers run;
        run.maps.push_back(overlay);
        for (const auto& l : layers) run.maps.push_back(l);

        RunPoint p;
        p.group = group;
        p.label = label;
        p.line = anchor.Mark().is_null() ? 0 : static_cast<uint32_t>(anchor.Mark().line + 1);
        p.config = build_config(ctx, run);
        try {
            p.config.validate();
        } catch (const Error& e) {
            if (!is_config_error(e.code())) throw;
            throw Error(e.code(), ctx.at(anchor.Mark()) + "group '" + group + "'" +
                                      (label.empty() ? "" : " at " + label) + ": " + e.detail());
        }
        out.push_back(std::move(p));

        size_t i = dims.size();
        while (i > 0) {
            --i;
            if (++idx[i] < dims[i].second.size()) break;
            idx[i] = 0;
            if (i == 0) return;
        }
        if (dims.empty()) return;
    }
}

}  // namespace

const std::vector<std::string>& sweep_axes() {
    static const std::vector<std::string> axes = [] {
        std::vector<std::string> v;
        for (const auto& [k, _] : kAxisPath) v.push_back(k);
        return v;
    }();
    return axes;
}

Experiment load_experiment(const std::string& yaml_text, const std::string& source) {
    const Ctx ctx{source};
    YAML::Node loaded;
    try {
        loaded = YAML::Load(yaml_text);
    } catch (const YAML::ParserException& e) {
        throw Error(ErrorCode::ConfigInvalid, ctx.at(e.mark) + e.msg);
    }
    const YAML::Node& root = loaded;
    if (!root || root.IsNull()) throw Error(ErrorCode::ConfigInvalid, source + ": empty configuration");
    check_keys(ctx, root, kTopKeys, "configuration");

    Experiment ex;
    ex.name = root["name"] ? get_string(ctx, root["name"]) : "run";
    if (ex.name.empty() || ex.name.find_first_of("/\\ ") != std::string::npos) {
        ctx.fail(root["name"], "name must be a non-empty file-name-safe word");
    }
    if (root["description"]) ex.description = get_string(ctx, root["description"]);

    const YAML::Node base = root["base"] ? root["base"] : YAML::Node(YAML::NodeType::Map);
    if (root["base"]) check_keys(ctx, base, kRunKeys, "base");
    const YAML::Node base_sweep = root["sweep"];

    if (!root["groups"]) {
        expand(ctx, "base", root["base"] ? base : root, {base}, merge_sweeps(ctx, {base_sweep}),
               ex.points);
        return ex;
    }
    const YAML::Node groups = root["groups"];
    if (!groups.IsSequence() || groups.size() == 0) ctx.fail(groups, "groups must be a non-empty list");
    std::set<std::string> seen;
    for (const auto& g : groups) {
        std::set<std::string> allowed = kRunKeys;
        allowed.insert({"name", "sweep", "description"});
        check_keys(ctx, g, allowed, "group");
        if (!g["name"]) ctx.fail(g, "group needs a name");
        const std::string name = get_string(ctx, g["name"]);
        if (!seen.insert(name).second) ctx.fail(g["name"], "duplicate group '" + name + "'");
        expand(ctx, name, g, {g, base}, merge_sweeps(ctx, {base_sweep, g["sweep"]}), ex.points);
    }
    return ex;
}

Experiment load_experiment_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigInvalid, path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_experiment(ss.str(), path);
}

}  // namespace pulsim
