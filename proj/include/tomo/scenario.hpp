#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tomo/flux.hpp"
#include "tomo/geometry.hpp"
#include "tomo/gp.hpp"
#include "tomo/posterior.hpp"
#include "tomo/synthetic.hpp"

namespace tomo {

struct FmcwSpec {
    int count = 20;
    double sigma_star = 0.0; // relative std of the point values
};

struct MaskSpec {
    double factor = kDefaultMaskFactor;
    bool apply_to_integrated = true;
};

/// Evidence-search configuration. sigma_factors multiply the data-estimated
/// field scale; empty lists fall back to the built-in candidate grids.
struct EvidenceSpec {
    std::vector<double> sigma_factors;
    std::vector<double> lengths;
};

/// One self-contained experiment description. Loadable from strict JSON
/// (unknown keys rejected, every component invariant checked at load).
struct ScenarioConfig {
    GridSpec grid;
    FluxModel flux_model;
    MtanhParams mtanh;
    std::optional<std::string> chord_file; // absent: built-in 13-channel set
    FmcwSpec fmcw;
    KernelKind kernel = KernelKind::FluxSE;
    std::optional<Hyperparams> fixed_hyper; // set: evidence search is skipped
    ModelTag model = ModelTag::Integrated;
    MaskSpec mask;
    EvidenceSpec evidence;
    double std_frac = 0.0;
    double noise_frac = 0.0;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
};

ScenarioConfig default_scenario();

/// Full invariant check of a (possibly hand-built) config; throws ConfigError.
void validate(const ScenarioConfig& config);

ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario_file(const std::string& path);

/// Canonical JSON echo of a resolved config (sorted keys, round-trip exact);
/// the manifest embeds this.
std::string scenario_json(const ScenarioConfig& config);

/// Chord list from a JSON array of {pivot_r, pivot_z, angle_deg, enabled}.
std::vector<Chord> parse_chords(const std::string& json_text);
std::vector<Chord> load_chords_file(const std::string& path);

/// The configured chord file, or the built-in channel set when absent.
std::vector<Chord> resolve_chords(const ScenarioConfig& config);

} // namespace tomo
