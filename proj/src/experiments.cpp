#include "tomo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "tomo/errors.hpp"
#include "tomo/rng.hpp"

namespace tomo {

namespace {

constexpr std::uint64_t kStreamEnsembleBase = 0x10000;

double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

} // namespace

MetricSummary summarize(std::vector<double> samples) {
    if (samples.empty())
        throw std::invalid_argument("summarize: need at least one sample");
    MetricSummary summary;
    const double n = static_cast<double>(samples.size());
    summary.mean = 0.0;
    for (double v : samples)
        summary.mean += v;
    summary.mean /= n;

    double var = 0.0;
    for (double v : samples)
        var += (v - summary.mean) * (v - summary.mean);
    summary.stddev = std::sqrt(var / n);

    std::sort(samples.begin(), samples.end());
    summary.median = quantile_sorted(samples, 0.5);
    return summary;
}

EnsembleStats noise_ensemble(const ScenarioConfig& config, ModelTag model, double noise_frac,
                             int samples, std::uint64_t seed,
                             std::optional<Hyperparams> fixed) {
    if (samples < 1)
        throw ConfigError("ensemble: sample count must be >= 1");
    if (noise_frac < 0.0)
        throw ConfigError("ensemble: noise level must be >= 0");

    // Clean base data; std_frac/sigma_star act as assumed stds only.
    ScenarioConfig base = config;
    base.noise_frac = 0.0;
    const double sigma_star_frac = base.fmcw.sigma_star;
    base.fmcw.sigma_star = 0.0;
    SyntheticData data = generate_synthetic_data(base, base.seed);
    data.points.sigma_star = sigma_star_frac * data.clean_point_values.array().abs().mean();

    const Hyperparams hyper =
        fixed ? *fixed : reconstruct(base, data, model, base.kernel).post.hyper;

    EnsembleStats stats;
    stats.noise_frac = noise_frac;
    stats.seed = seed;
    stats.requested = samples;

    for (int i = 0; i < samples; ++i) {
        auto rng = substream(seed, kStreamEnsembleBase + static_cast<std::uint64_t>(i));
        std::normal_distribution<double> gauss(0.0, 1.0); // fresh state per sample
        SyntheticData draw = data;
        if (noise_frac > 0.0) {
            for (Eigen::Index j = 0; j < draw.line.values.size(); ++j)
                draw.line.values[j] = data.clean_d[j] * (1.0 + noise_frac * gauss(rng));
            for (Eigen::Index j = 0; j < draw.points.values.size(); ++j)
                draw.points.values[j] =
                    data.clean_point_values[j] * (1.0 + noise_frac * gauss(rng));
        }
        try {
            const auto recon = reconstruct_fixed(base, draw, model, base.kernel, hyper);
            stats.rrmse.push_back(recon.metrics.rrmse);
            stats.xi_bar.push_back(recon.metrics.xi_bar);
            stats.xi_max.push_back(recon.metrics.xi_max);
        } catch (const NumericalError&) {
            ++stats.failed;
        }
    }
    stats.completed = samples - stats.failed;
    if (stats.failed * 10 > stats.requested)
        throw NumericalError("ensemble: " + std::to_string(stats.failed) + " of " +
                             std::to_string(stats.requested) + " samples failed (> 10%)");

    stats.rrmse_stats = summarize(stats.rrmse);
    stats.xi_bar_stats = summarize(stats.xi_bar);
    stats.xi_max_stats = summarize(stats.xi_max);
    return stats;
}

std::vector<GridSweepRow> grid_sweep(const ScenarioConfig& config,
                                     std::span<const GridSpec> grids) {
    if (grids.empty())
        throw ConfigError("grid sweep: the grid list must not be empty");

    std::vector<GridSweepRow> rows;
    rows.reserve(grids.size());
    for (const GridSpec& spec : grids) {
        ScenarioConfig scenario = config;
        scenario.grid = spec;
        const std::string label =
            "grid sweep [" + std::to_string(spec.n_r) + "x" + std::to_string(spec.n_z) + "]: ";
        try {
            const SyntheticData data = generate_synthetic_data(scenario, scenario.seed);
            const auto recon = reconstruct(scenario, data, scenario.model, scenario.kernel);
            rows.push_back({spec, data.grid.node_count(), recon.post.hyper, recon.metrics,
                            max_row_sum_error(data.contrib)});
        } catch (const ConfigError& err) {
            throw ConfigError(label + err.what());
        } catch (const std::exception& err) {
            throw NumericalError(label + err.what());
        }
    }
    return rows;
}

std::vector<StdDevSweepRow> stddev_sweep(const ScenarioConfig& config,
                                         std::span<const double> levels) {
    if (levels.empty())
        throw ConfigError("stddev sweep: the level list must not be empty");
    for (double level : levels)
        if (level < 0.0)
            throw ConfigError("stddev sweep: levels must be >= 0");

    ScenarioConfig base = config;
    base.noise_frac = 0.0;
    base.std_frac = 0.0;
    base.fmcw.sigma_star = 0.0;
    SyntheticData data = generate_synthetic_data(base, base.seed);

    const Hyperparams hyper =
        base.fixed_hyper ? *base.fixed_hyper
                         : reconstruct(base, data, base.model, base.kernel).post.hyper;
    const double mean_point = data.clean_point_values.array().abs().mean();

    std::vector<StdDevSweepRow> rows;
    rows.reserve(levels.size());
    for (double level : levels) {
        SyntheticData run = data;
        run.line.variances = (level * data.clean_d.array().abs()).square().matrix();
        run.points.sigma_star = level * mean_point;
        const auto recon = reconstruct_fixed(base, run, base.model, base.kernel, hyper);
        rows.push_back({level, hyper, recon.metrics, recon.post.node_std.mean(),
                        recon.bp.relative_norm});
    }
    return rows;
}

std::vector<HistogramBin> histogram_fd(std::vector<double> samples) {
    if (samples.empty())
        throw std::invalid_argument("histogram: need at least one sample");
    std::sort(samples.begin(), samples.end());
    const double lo = samples.front();
    const double hi = samples.back();
    const double iqr = quantile_sorted(samples, 0.75) - quantile_sorted(samples, 0.25);
    const double width =
        2.0 * iqr / std::cbrt(static_cast<double>(samples.size()));

    long bins = 1;
    if (width > 0.0 && hi > lo)
        bins = std::clamp(static_cast<long>(std::ceil((hi - lo) / width)), 1L, 10000L);

    std::vector<HistogramBin> hist(static_cast<std::size_t>(bins));
    const double step = bins > 0 && hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
    for (long b = 0; b < bins; ++b) {
        hist[static_cast<std::size_t>(b)].left = lo + step * static_cast<double>(b);
        hist[static_cast<std::size_t>(b)].right = lo + step * static_cast<double>(b + 1);
    }
    for (double v : samples) {
        long b = static_cast<long>(std::floor((v - lo) / step));
        b = std::clamp(b, 0L, bins - 1);
        ++hist[static_cast<std::size_t>(b)].count;
    }
    return hist;
}

double max_row_sum_error(const ContributionMatrix& contrib) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < contrib.entries.rows(); ++j)
        worst = std::max(worst, std::abs(contrib.entries.row(j).sum() -
                                         contrib.clipped_lengths[static_cast<std::size_t>(j)]));
    return worst;
}

} // namespace tomo
