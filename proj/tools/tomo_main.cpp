#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tomo/cli.hpp"

namespace {

struct RawArgs {
    std::string config_path, out_dir, model, kernel, axis;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::vector<double> levels;
    int samples = 0;
    bool samples_set = false;
    bool dump_covariance = false;
};

void add_common_flags(CLI::App* cmd, RawArgs& raw) {
    cmd->add_option("--config", raw.config_path, "Scenario JSON config path");
    cmd->add_option("--out", raw.out_dir, "Output directory (overrides config and TOMO_OUT_ROOT)");
    cmd->add_option("--seed", raw.seed, "RNG seed (overrides config)")
        ->each([&raw](const std::string&) { raw.seed_set = true; });
}

void add_model_flags(CLI::App* cmd, RawArgs& raw) {
    cmd->add_option("--model", raw.model, "single | integrated")
        ->check(CLI::IsMember({"single", "integrated"}));
    cmd->add_option("--kernel", raw.kernel, "spatial | flux")
        ->check(CLI::IsMember({"spatial", "flux"}));
}

tomo::CliOptions to_options(const RawArgs& raw) {
    tomo::CliOptions options;
    if (!raw.config_path.empty())
        options.config_path = raw.config_path;
    if (!raw.out_dir.empty())
        options.out = raw.out_dir;
    if (raw.seed_set)
        options.seed = raw.seed;
    if (raw.model == "single")
        options.model = tomo::ModelTag::Single;
    else if (raw.model == "integrated")
        options.model = tomo::ModelTag::Integrated;
    if (raw.kernel == "spatial")
        options.kernel = tomo::KernelKind::SpatialSE;
    else if (raw.kernel == "flux")
        options.kernel = tomo::KernelKind::FluxSE;
    options.levels = raw.levels;
    if (raw.samples_set)
        options.samples = raw.samples;
    options.sweep_axis = raw.axis;
    options.dump_covariance = raw.dump_covariance;
    return options;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian tomography of 2D plasma electron density"};
    app.require_subcommand(1);
    RawArgs raw;

    auto* generate = app.add_subcommand("generate", "Write synthetic field and diagnostic data");
    add_common_flags(generate, raw);

    auto* reconstruct = app.add_subcommand("reconstruct", "Run one reconstruction");
    add_common_flags(reconstruct, raw);
    add_model_flags(reconstruct, raw);
    reconstruct->add_flag("--dump-covariance", raw.dump_covariance,
                          "Also write the posterior covariance (binary)");

    auto* sweep = app.add_subcommand("sweep", "Mesh or assumed-std sensitivity sweep");
    add_common_flags(sweep, raw);
    add_model_flags(sweep, raw);
    sweep->add_option("--axis", raw.axis, "grid | stddev")->required();
    sweep->add_option("--levels", raw.levels, "Assumed-std levels for axis=stddev");

    auto* ensemble = app.add_subcommand("ensemble", "Noise Monte Carlo per level");
    add_common_flags(ensemble, raw);
    add_model_flags(ensemble, raw);
    ensemble->add_option("--levels", raw.levels, "Noise levels (fractions)");
    ensemble->add_option("--samples", raw.samples, "Samples per level")
        ->each([&raw](const std::string&) { raw.samples_set = true; });

    CLI11_PARSE(app, argc, argv);

    const tomo::CliOptions options = to_options(raw);
    if (generate->parsed())
        return tomo::run_generate(options);
    if (reconstruct->parsed())
        return tomo::run_reconstruct(options);
    if (sweep->parsed())
        return tomo::run_sweep(options);
    return tomo::run_ensemble(options);
}
