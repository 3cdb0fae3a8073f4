#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tomo/posterior.hpp"

namespace tomo {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

/// Parsed command line; flags override config scalars, which override
/// defaults. The output directory resolves as --out, else
/// $TOMO_OUT_ROOT/<config out_dir>, else <config out_dir>.
struct CliOptions {
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<ModelTag> model;
    std::optional<KernelKind> kernel;
    std::vector<double> levels; // sweep/ensemble levels
    std::optional<int> samples; // ensemble size
    std::string sweep_axis;     // "grid" or "stddev"
    bool dump_covariance = false; // reconstruct: also write the posterior covariance
};

int run_generate(const CliOptions& options);
int run_reconstruct(const CliOptions& options);
int run_sweep(const CliOptions& options);
int run_ensemble(const CliOptions& options);

} // namespace tomo
