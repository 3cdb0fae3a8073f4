#include "tomo/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "tomo/errors.hpp"

namespace tomo {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& context,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object())
        throw ConfigError(context + ": expected a JSON object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError(context + ": unknown key \"" + item.key() + "\"");
    }
}

double get_number(const json& obj, const std::string& context, const char* key,
                  double fallback) {
    if (!obj.contains(key))
        return fallback;
    if (!obj[key].is_number())
        throw ConfigError(context + "." + key + ": expected a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& context, const char* key, int fallback) {
    if (!obj.contains(key))
        return fallback;
    if (!obj[key].is_number_integer())
        throw ConfigError(context + "." + key + ": expected an integer");
    return obj[key].get<int>();
}

bool get_bool(const json& obj, const std::string& context, const char* key, bool fallback) {
    if (!obj.contains(key))
        return fallback;
    if (!obj[key].is_boolean())
        throw ConfigError(context + "." + key + ": expected a boolean");
    return obj[key].get<bool>();
}

std::vector<double> get_number_list(const json& obj, const std::string& context,
                                    const char* key) {
    if (!obj.contains(key))
        return {};
    if (!obj[key].is_array())
        throw ConfigError(context + "." + key + ": expected an array of numbers");
    std::vector<double> values;
    for (const auto& v : obj[key]) {
        if (!v.is_number())
            throw ConfigError(context + "." + key + ": expected an array of numbers");
        values.push_back(v.get<double>());
    }
    return values;
}

GridSpec parse_grid(const json& obj) {
    check_keys(obj, "grid", {"n_r", "n_z", "r_min", "r_max", "z_min", "z_max"});
    GridSpec spec;
    spec.n_r = get_int(obj, "grid", "n_r", spec.n_r);
    spec.n_z = get_int(obj, "grid", "n_z", spec.n_z);
    spec.r_min = get_number(obj, "grid", "r_min", spec.r_min);
    spec.r_max = get_number(obj, "grid", "r_max", spec.r_max);
    spec.z_min = get_number(obj, "grid", "z_min", spec.z_min);
    spec.z_max = get_number(obj, "grid", "z_max", spec.z_max);
    return spec;
}

FluxModel parse_flux_model(const json& obj) {
    check_keys(obj, "flux_model", {"r0", "z0", "a", "b", "shift"});
    FluxModel model;
    model.r0 = get_number(obj, "flux_model", "r0", model.r0);
    model.z0 = get_number(obj, "flux_model", "z0", model.z0);
    model.a = get_number(obj, "flux_model", "a", model.a);
    model.b = get_number(obj, "flux_model", "b", model.b);
    model.shift = get_number(obj, "flux_model", "shift", model.shift);
    return model;
}

MtanhParams parse_mtanh(const json& obj) {
    check_keys(obj, "mtanh", {"amplitude", "offset", "xsym", "hwid", "alpha"});
    MtanhParams params;
    params.amplitude = get_number(obj, "mtanh", "amplitude", params.amplitude);
    params.offset = get_number(obj, "mtanh", "offset", params.offset);
    params.xsym = get_number(obj, "mtanh", "xsym", params.xsym);
    params.hwid = get_number(obj, "mtanh", "hwid", params.hwid);
    params.alpha = get_number(obj, "mtanh", "alpha", params.alpha);
    return params;
}

KernelKind parse_kernel_kind(const json& value) {
    if (!value.is_string())
        throw ConfigError("kernel.kind: expected \"spatial\" or \"flux\"");
    const std::string kind = value.get<std::string>();
    if (kind == "spatial")
        return KernelKind::SpatialSE;
    if (kind == "flux")
        return KernelKind::FluxSE;
    throw ConfigError("kernel.kind: expected \"spatial\" or \"flux\" (got \"" + kind + "\")");
}

ModelTag parse_model_tag(const json& value) {
    if (!value.is_string())
        throw ConfigError("model: expected \"single\" or \"integrated\"");
    const std::string tag = value.get<std::string>();
    if (tag == "single")
        return ModelTag::Single;
    if (tag == "integrated")
        return ModelTag::Integrated;
    throw ConfigError("model: expected \"single\" or \"integrated\" (got \"" + tag + "\")");
}

} // namespace

ScenarioConfig default_scenario() { return ScenarioConfig{}; }

void validate(const ScenarioConfig& config) {
    Grid grid(config.grid); // throws on malformed bounds/counts
    validate(config.flux_model);
    validate(config.mtanh);
    if (config.flux_model.r0 < config.grid.r_min || config.flux_model.r0 > config.grid.r_max ||
        config.flux_model.z0 < config.grid.z_min || config.flux_model.z0 > config.grid.z_max)
        throw ConfigError("flux_model: the axis must lie inside the grid bounding box");
    if (config.fmcw.count < 1)
        throw ConfigError("fmcw.count must be >= 1 (got " + std::to_string(config.fmcw.count) + ")");
    if (config.fmcw.sigma_star < 0.0)
        throw ConfigError("fmcw.sigma_star must be >= 0");
    if (config.fixed_hyper) {
        if (!(config.fixed_hyper->sigma > 0.0) || !(config.fixed_hyper->length > 0.0))
            throw ConfigError("kernel: fixed sigma and length must be > 0");
    }
    if (!(config.mask.factor > 0.0 && config.mask.factor < 1.0))
        throw ConfigError("mask.factor must lie in (0, 1)");
    for (double v : config.evidence.sigma_factors)
        if (!(v > 0.0))
            throw ConfigError("evidence.sigma_factors must all be > 0");
    for (double v : config.evidence.lengths)
        if (!(v > 0.0))
            throw ConfigError("evidence.lengths must all be > 0");
    if (!config.evidence.sigma_factors.empty() && config.evidence.sigma_factors.size() < 2)
        throw ConfigError("evidence.sigma_factors needs at least 2 values");
    if (!config.evidence.lengths.empty() && config.evidence.lengths.size() < 2)
        throw ConfigError("evidence.lengths needs at least 2 values");
    if (config.std_frac < 0.0 || config.noise_frac < 0.0)
        throw ConfigError("std_frac and noise_frac must be >= 0");
    if (config.out_dir.empty())
        throw ConfigError("out_dir must not be empty");
}

ScenarioConfig parse_scenario(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config: invalid JSON: ") + err.what());
    }
    check_keys(root, "config",
               {"grid", "flux_model", "mtanh", "chord_file", "fmcw", "kernel", "model", "mask",
                "evidence", "std_frac", "noise_frac", "seed", "out_dir"});

    ScenarioConfig config;
    if (root.contains("grid"))
        config.grid = parse_grid(root["grid"]);
    if (root.contains("flux_model"))
        config.flux_model = parse_flux_model(root["flux_model"]);
    if (root.contains("mtanh"))
        config.mtanh = parse_mtanh(root["mtanh"]);
    if (root.contains("chord_file")) {
        if (!root["chord_file"].is_string())
            throw ConfigError("chord_file: expected a path string");
        config.chord_file = root["chord_file"].get<std::string>();
    }
    if (root.contains("fmcw")) {
        check_keys(root["fmcw"], "fmcw", {"count", "sigma_star"});
        config.fmcw.count = get_int(root["fmcw"], "fmcw", "count", config.fmcw.count);
        config.fmcw.sigma_star =
            get_number(root["fmcw"], "fmcw", "sigma_star", config.fmcw.sigma_star);
    }
    if (root.contains("kernel")) {
        const json& kernel = root["kernel"];
        check_keys(kernel, "kernel", {"kind", "sigma", "length"});
        if (kernel.contains("kind"))
            config.kernel = parse_kernel_kind(kernel["kind"]);
        const bool has_sigma = kernel.contains("sigma");
        const bool has_length = kernel.contains("length");
        if (has_sigma != has_length)
            throw ConfigError("kernel: fixed hyperparameters need both sigma and length");
        if (has_sigma) {
            config.fixed_hyper = Hyperparams{get_number(kernel, "kernel", "sigma", 0.0),
                                             get_number(kernel, "kernel", "length", 0.0)};
        }
    }
    if (root.contains("model"))
        config.model = parse_model_tag(root["model"]);
    if (root.contains("mask")) {
        check_keys(root["mask"], "mask", {"factor", "apply_to_integrated"});
        config.mask.factor = get_number(root["mask"], "mask", "factor", config.mask.factor);
        config.mask.apply_to_integrated = get_bool(root["mask"], "mask", "apply_to_integrated",
                                                   config.mask.apply_to_integrated);
    }
    if (root.contains("evidence")) {
        check_keys(root["evidence"], "evidence", {"sigma_factors", "lengths"});
        config.evidence.sigma_factors =
            get_number_list(root["evidence"], "evidence", "sigma_factors");
        config.evidence.lengths = get_number_list(root["evidence"], "evidence", "lengths");
    }
    config.std_frac = get_number(root, "config", "std_frac", config.std_frac);
    config.noise_frac = get_number(root, "config", "noise_frac", config.noise_frac);
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer())
            throw ConfigError("seed: expected a nonnegative integer");
        const auto seed = root["seed"].get<std::int64_t>();
        if (seed < 0)
            throw ConfigError("seed: expected a nonnegative integer");
        config.seed = static_cast<std::uint64_t>(seed);
    }
    if (root.contains("out_dir")) {
        if (!root["out_dir"].is_string())
            throw ConfigError("out_dir: expected a string");
        config.out_dir = root["out_dir"].get<std::string>();
    }

    validate(config);
    return config;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string scenario_json(const ScenarioConfig& config) {
    json root;
    root["grid"] = {{"n_r", config.grid.n_r},     {"n_z", config.grid.n_z},
                    {"r_min", config.grid.r_min}, {"r_max", config.grid.r_max},
                    {"z_min", config.grid.z_min}, {"z_max", config.grid.z_max}};
    root["flux_model"] = {{"r0", config.flux_model.r0},
                          {"z0", config.flux_model.z0},
                          {"a", config.flux_model.a},
                          {"b", config.flux_model.b},
                          {"shift", config.flux_model.shift}};
    root["mtanh"] = {{"amplitude", config.mtanh.amplitude},
                     {"offset", config.mtanh.offset},
                     {"xsym", config.mtanh.xsym},
                     {"hwid", config.mtanh.hwid},
                     {"alpha", config.mtanh.alpha}};
    if (config.chord_file)
        root["chord_file"] = *config.chord_file;
    root["fmcw"] = {{"count", config.fmcw.count}, {"sigma_star", config.fmcw.sigma_star}};
    root["kernel"] = {{"kind", to_string(config.kernel)}};
    if (config.fixed_hyper) {
        root["kernel"]["sigma"] = config.fixed_hyper->sigma;
        root["kernel"]["length"] = config.fixed_hyper->length;
    }
    root["model"] = to_string(config.model);
    root["mask"] = {{"factor", config.mask.factor},
                    {"apply_to_integrated", config.mask.apply_to_integrated}};
    if (!config.evidence.sigma_factors.empty() || !config.evidence.lengths.empty()) {
        root["evidence"] = json::object();
        if (!config.evidence.sigma_factors.empty())
            root["evidence"]["sigma_factors"] = config.evidence.sigma_factors;
        if (!config.evidence.lengths.empty())
            root["evidence"]["lengths"] = config.evidence.lengths;
    }
    root["std_frac"] = config.std_frac;
    root["noise_frac"] = config.noise_frac;
    root["seed"] = config.seed;
    root["out_dir"] = config.out_dir;
    return root.dump(2);
}

std::vector<Chord> parse_chords(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("chords: invalid JSON: ") + err.what());
    }
    if (!root.is_array())
        throw ConfigError("chords: expected a JSON array");

    std::vector<Chord> chords;
    for (const auto& entry : root) {
        check_keys(entry, "chord", {"pivot_r", "pivot_z", "angle_deg", "enabled"});
        if (!entry.contains("pivot_r") || !entry.contains("pivot_z"))
            throw ConfigError("chord: pivot_r and pivot_z are required");
        Chord chord;
        chord.pivot.r = get_number(entry, "chord", "pivot_r", 0.0);
        chord.pivot.z = get_number(entry, "chord", "pivot_z", 0.0);
        chord.angle_deg = get_number(entry, "chord", "angle_deg", 0.0);
        chord.enabled = get_bool(entry, "chord", "enabled", true);
        chords.push_back(chord);
    }
    if (chords.empty())
        throw ConfigError("chords: the chord list must not be empty");
    return chords;
}

std::vector<Chord> load_chords_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open chord file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_chords(buffer.str());
}

std::vector<Chord> resolve_chords(const ScenarioConfig& config) {
    return config.chord_file ? load_chords_file(*config.chord_file) : default_fir_chords();
}

} // namespace tomo
