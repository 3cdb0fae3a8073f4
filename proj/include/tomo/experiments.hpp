#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tomo/pipeline.hpp"

namespace tomo {

struct MetricSummary {
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0; // population standard deviation
};

MetricSummary summarize(std::vector<double> samples);

/// Per-sample metrics of a noise Monte Carlo plus their summaries. Failed
/// samples (rare factorization breakdowns) are recorded and excluded.
struct EnsembleStats {
    double noise_frac = 0.0;
    std::uint64_t seed = 0;
    int requested = 0;
    int completed = 0;
    int failed = 0;
    std::vector<double> rrmse, xi_bar, xi_max; // one entry per completed sample
    MetricSummary rrmse_stats, xi_bar_stats, xi_max_stats;
};

/// N reconstructions with fresh multiplicative Gaussian noise on both the
/// line integrals and the point values (deterministic per-sample substreams
/// of `seed`). Assumed variances stay at the scenario's std_frac /
/// fmcw.sigma_star; hyperparameters are frozen (passed in, or optimized once
/// on the clean data). Throws NumericalError when more than 10% of the
/// samples fail.
EnsembleStats noise_ensemble(const ScenarioConfig& config, ModelTag model, double noise_frac,
                             int samples, std::uint64_t seed,
                             std::optional<Hyperparams> fixed = std::nullopt);

struct GridSweepRow {
    GridSpec grid;
    int node_count = 0;
    Hyperparams hyper;
    Metrics metrics;
    double row_sum_error = 0.0; // max over chords of |row sum - clipped length|
};

/// Regenerates geometry, truth, and reconstruction on each grid.
std::vector<GridSweepRow> grid_sweep(const ScenarioConfig& config,
                                     std::span<const GridSpec> grids);

struct StdDevSweepRow {
    double level = 0.0;
    Hyperparams hyper;
    Metrics metrics;
    double mean_posterior_std = 0.0;
    double bp_relative_norm = 0.0;
};

/// Reconstructs clean data per assumed-std level: the likelihood variances
/// become (level * |d|)^2 and sigma* becomes level * mean(|v*|), while the
/// data itself stays noise-free. Hyperparameters are frozen at the
/// level-0 optimum.
std::vector<StdDevSweepRow> stddev_sweep(const ScenarioConfig& config,
                                         std::span<const double> levels);

struct HistogramBin {
    double left = 0.0, right = 0.0;
    long count = 0;
};

/// Freedman-Diaconis binning; degenerate samples collapse to a single bin.
std::vector<HistogramBin> histogram_fd(std::vector<double> samples);

/// max over chords of |sum_i R(j,i) - clipped length of chord j|.
double max_row_sum_error(const ContributionMatrix& contrib);

} // namespace tomo
