#include "tomo/pipeline.hpp"

#include <algorithm>
#include <utility>

#include "tomo/errors.hpp"
#include "tomo/rng.hpp"

namespace tomo {

namespace {

// Substream ids for the independent noise draws of one scenario.
constexpr std::uint64_t kStreamLineNoise = 1;
constexpr std::uint64_t kStreamFmcwNoise = 2;

} // namespace

SyntheticData generate_synthetic_data(const ScenarioConfig& config, std::uint64_t seed) {
    validate(config);

    Grid grid(config.grid);
    SyntheticData data{
        .grid = grid,
        .flux_model = config.flux_model,
        .psi = flux_map(config.flux_model, grid),
        .truth = synthesize_field(grid, config.flux_model, config.mtanh),
        .chords = {},
        .channels = {},
        .contrib = {},
        .clean_d = {},
        .line = {},
        .points = {},
        .clean_point_values = {},
    };

    const std::vector<Chord> all_chords = resolve_chords(config);
    for (std::size_t i = 0; i < all_chords.size(); ++i) {
        if (!all_chords[i].enabled)
            continue;
        data.chords.push_back(all_chords[i]);
        data.channels.push_back(static_cast<int>(i));
    }
    if (data.chords.empty())
        throw ConfigError("scenario: no enabled chords");

    data.contrib = contribution_matrix(grid, data.chords);
    data.clean_d = forward_project(
        data.contrib, Eigen::Map<const Eigen::VectorXd>(data.truth.values.data(),
                                                        static_cast<Eigen::Index>(
                                                            data.truth.values.size())));

    auto line_rng = substream(seed, kStreamLineNoise);
    data.line = apply_measurement_model(data.clean_d, config.std_frac, config.noise_frac, line_rng);
    data.line.channels = data.channels;

    auto fmcw_rng = substream(seed, kStreamFmcwNoise);
    data.points = sample_fmcw(config.flux_model, config.mtanh, config.fmcw.count,
                              config.fmcw.sigma_star, fmcw_rng);
    data.clean_point_values = Eigen::VectorXd(data.points.values.size());
    for (Eigen::Index i = 0; i < data.clean_point_values.size(); ++i) {
        const Point loc = data.points.locations[static_cast<std::size_t>(i)];
        data.clean_point_values[i] =
            pedestal_density(std::sqrt(normalized_flux(config.flux_model, loc)), config.mtanh);
    }
    return data;
}

double estimate_field_scale(const SyntheticData& data) {
    const double max_d = data.line.values.size() > 0 ? data.line.values.array().abs().maxCoeff() : 0.0;
    const double max_len = data.contrib.clipped_lengths.empty()
                               ? 0.0
                               : *std::max_element(data.contrib.clipped_lengths.begin(),
                                                   data.contrib.clipped_lengths.end());
    if (max_d <= 0.0 || max_len <= 0.0)
        return 1.0;
    return max_d / max_len;
}

GaussianField build_candidate_field(const ScenarioConfig& config, const SyntheticData& data,
                                    ModelTag model, KernelKind kind, const Hyperparams& hyper) {
    const KernelSpec spec = kind == KernelKind::FluxSE
                                ? flux_se_kernel(hyper, data.flux_model)
                                : spatial_se_kernel(hyper);
    if (model == ModelTag::Single) {
        GaussianField prior = gp_prior(spec, data.grid.nodes());
        prior.cov = mask_covariance_outside_lcfs(std::move(prior.cov), data.psi,
                                                 config.mask.factor);
        return prior;
    }
    GaussianField conditional = gp_condition(spec, data.grid, data.points);
    if (config.mask.apply_to_integrated)
        conditional.cov = mask_covariance_outside_lcfs(std::move(conditional.cov), data.psi,
                                                       config.mask.factor);
    return conditional;
}

namespace {

ReconstructionResult run_fusion(const ScenarioConfig& config, const SyntheticData& data,
                                ModelTag model, KernelKind kind, Hyperparams hyper,
                                EvidenceSearchResult evidence, bool fixed) {
    ReconstructionResult result;
    result.input_field = build_candidate_field(config, data, model, kind, hyper);
    result.post = fuse(result.input_field, data.contrib.entries, data.line, model, hyper);
    result.evidence = std::move(evidence);
    result.hyper_fixed = fixed;
    result.metrics = compute_metrics(result.post.field.mean, data.truth);
    result.bp = back_projection_check(data.contrib.entries, result.post, data.line);
    return result;
}

} // namespace

ReconstructionResult reconstruct(const ScenarioConfig& config, const SyntheticData& data,
                                 ModelTag model, KernelKind kind) {
    if (config.fixed_hyper)
        return reconstruct_fixed(config, data, model, kind, *config.fixed_hyper);

    EvidenceSearchSpace space = default_search_space(kind, estimate_field_scale(data));
    if (!config.evidence.sigma_factors.empty()) {
        const double scale = estimate_field_scale(data);
        space.sigmas.clear();
        for (double factor : config.evidence.sigma_factors)
            space.sigmas.push_back(factor * scale);
    }
    if (!config.evidence.lengths.empty())
        space.lengths = config.evidence.lengths;

    const auto build = [&](const Hyperparams& hyper) {
        return build_candidate_field(config, data, model, kind, hyper);
    };
    EvidenceSearchResult evidence =
        optimize_hyperparams(space, build, data.contrib.entries, data.line);
    const Hyperparams best = evidence.best;
    return run_fusion(config, data, model, kind, best, std::move(evidence), false);
}

ReconstructionResult reconstruct_fixed(const ScenarioConfig& config, const SyntheticData& data,
                                       ModelTag model, KernelKind kind, Hyperparams hyper) {
    EvidenceSearchResult evidence;
    evidence.best = hyper;
    evidence.best_log_ev =
        log_evidence(build_candidate_field(config, data, model, kind, hyper),
                     data.contrib.entries, data.line);
    evidence.surface = {{hyper.sigma, hyper.length, evidence.best_log_ev}};
    return run_fusion(config, data, model, kind, hyper, std::move(evidence), true);
}

} // namespace tomo
