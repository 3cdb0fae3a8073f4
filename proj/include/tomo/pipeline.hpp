#pragma once

#include <cstdint>
#include <vector>

#include "tomo/metrics.hpp"
#include "tomo/scenario.hpp"

namespace tomo {

/// Everything one scenario produces before inversion: geometry, ground truth,
/// and the virtual diagnostic data. `clean_d` / `clean_point_values` keep the
/// noise-free signals so ensembles can redraw noise without regenerating.
struct SyntheticData {
    Grid grid;
    FluxModel flux_model;
    FluxMap psi;
    SyntheticField truth;
    std::vector<Chord> chords;  // enabled chords only
    std::vector<int> channels;  // original channel ids of the enabled chords
    ContributionMatrix contrib; // over the enabled chords
    Eigen::VectorXd clean_d;
    LineMeasurements line;
    PointMeasurements points;
    Eigen::VectorXd clean_point_values;
};

/// Deterministic generation from (config, seed): noise draws come from fixed
/// substreams of the seed.
SyntheticData generate_synthetic_data(const ScenarioConfig& config, std::uint64_t seed);

/// Crude density scale from the data alone: max |d| / max clipped chord
/// length. Anchors the sigma candidates of the evidence search.
double estimate_field_scale(const SyntheticData& data);

/// The field entering the fusion for a hyperparameter candidate: masked prior
/// (single model) or point-conditioned field (integrated model).
GaussianField build_candidate_field(const ScenarioConfig& config, const SyntheticData& data,
                                    ModelTag model, KernelKind kind, const Hyperparams& hyper);

struct ReconstructionResult {
    PosteriorResult post;
    GaussianField input_field; // the prior/conditional the fusion consumed
    EvidenceSearchResult evidence;
    bool hyper_fixed = false;
    Metrics metrics;
    BackProjectionCheck bp;
};

/// Hyperparameter selection (config-fixed or evidence search), fusion, and
/// evaluation against the scenario's ground truth.
ReconstructionResult reconstruct(const ScenarioConfig& config, const SyntheticData& data,
                                 ModelTag model, KernelKind kind);

/// Same, with externally frozen hyperparameters (sweeps and ensembles).
ReconstructionResult reconstruct_fixed(const ScenarioConfig& config, const SyntheticData& data,
                                       ModelTag model, KernelKind kind, Hyperparams hyper);

} // namespace tomo
