#include "tomo/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>

#include <json.hpp>

#include "tomo/csv.hpp"
#include "tomo/errors.hpp"
#include "tomo/experiments.hpp"
#include "tomo/pipeline.hpp"

namespace tomo {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

ScenarioConfig resolve_config(const CliOptions& options) {
    ScenarioConfig config =
        options.config_path ? load_scenario_file(*options.config_path) : default_scenario();
    if (options.seed)
        config.seed = *options.seed;
    if (options.model)
        config.model = *options.model;
    if (options.kernel)
        config.kernel = *options.kernel;
    return config;
}

std::filesystem::path resolve_out_dir(const CliOptions& options, const ScenarioConfig& config) {
    std::filesystem::path dir;
    if (options.out) {
        dir = *options.out;
    } else if (const char* root = std::getenv("TOMO_OUT_ROOT")) {
        dir = std::filesystem::path(root) / config.out_dir;
    } else {
        dir = config.out_dir;
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

void write_manifest(const std::filesystem::path& dir, const char* command,
                    const ScenarioConfig& config, const std::vector<std::string>& outputs,
                    const json& extra = json::object()) {
    json manifest;
    manifest["command"] = command;
    manifest["version"] = kVersion;
    manifest["seed"] = config.seed;
    manifest["config"] = json::parse(scenario_json(config));
    manifest["outputs"] = outputs;
    for (const auto& item : extra.items())
        manifest[item.key()] = item.value();
    write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return kExitOk;
    } catch (const ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfig;
    } catch (const IoError& err) {
        std::cerr << "io error: " << err.what() << "\n";
        return kExitIo;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitNumerical;
    }
}

std::string level_token(double level) {
    return "noise" + format_double(level * 100.0) + "pct";
}

json metrics_json(const ReconstructionResult& recon, KernelKind kind) {
    json out;
    out["model"] = to_string(recon.post.model);
    out["kernel"] = to_string(kind);
    out["sigma"] = recon.post.hyper.sigma;
    out["length"] = recon.post.hyper.length;
    out["log_evidence"] = recon.post.log_evidence;
    out["hyperparameters"] = recon.hyper_fixed ? "fixed" : "optimized";
    out["rrmse"] = recon.metrics.rrmse;
    out["xi_bar"] = recon.metrics.xi_bar;
    out["xi_max"] = recon.metrics.xi_max;
    out["bp_relative_norm"] = recon.bp.relative_norm;
    return out;
}

} // namespace

int run_generate(const CliOptions& options) {
    return guarded([&] {
        const ScenarioConfig config = resolve_config(options);
        const auto dir = resolve_out_dir(options, config);
        const SyntheticData data = generate_synthetic_data(config, config.seed);

        write_synthetic_field_csv((dir / "synthetic_field.csv").string(), data.grid, data.truth);
        write_flux_map_csv((dir / "flux_map.csv").string(), data.grid, data.psi);
        write_line_measurements_csv((dir / "line_measurements.csv").string(), data.line);
        write_point_measurements_csv((dir / "point_measurements.csv").string(), data.points);
        write_manifest(dir, "generate", config,
                       {"synthetic_field.csv", "flux_map.csv", "line_measurements.csv",
                        "point_measurements.csv"});
    });
}

int run_reconstruct(const CliOptions& options) {
    return guarded([&] {
        const ScenarioConfig config = resolve_config(options);
        const auto dir = resolve_out_dir(options, config);
        const SyntheticData data = generate_synthetic_data(config, config.seed);
        const ReconstructionResult recon =
            reconstruct(config, data, config.model, config.kernel);

        write_posterior_csv((dir / "posterior.csv").string(), data.grid, recon.post);
        write_back_projection_csv((dir / "back_projection.csv").string(), data.line, recon.post);
        write_evidence_surface_csv((dir / "evidence_surface.csv").string(),
                                   recon.evidence.surface);
        write_text_file((dir / "metrics.json").string(),
                        metrics_json(recon, config.kernel).dump(2) + "\n");
        std::vector<std::string> outputs = {"posterior.csv", "back_projection.csv",
                                            "evidence_surface.csv", "metrics.json"};
        if (options.dump_covariance) {
            write_covariance_binary((dir / "posterior_covariance.bin").string(),
                                    recon.post.field.cov);
            outputs.push_back("posterior_covariance.bin");
        }
        write_manifest(dir, "reconstruct", config, outputs,
                       json{{"hyperparameters", recon.hyper_fixed ? "fixed" : "optimized"}});
    });
}

int run_sweep(const CliOptions& options) {
    return guarded([&] {
        const ScenarioConfig config = resolve_config(options);
        const auto dir = resolve_out_dir(options, config);

        if (options.sweep_axis == "grid") {
            // The four study meshes, on the configured bounding box.
            std::vector<GridSpec> grids;
            for (auto [nr, nz] : {std::pair{14, 15}, {28, 30}, {42, 45}, {56, 60}}) {
                GridSpec spec = config.grid;
                spec.n_r = nr;
                spec.n_z = nz;
                grids.push_back(spec);
            }
            const auto rows = grid_sweep(config, grids);
            write_grid_sweep_csv((dir / "grid_sweep.csv").string(), rows);
            write_manifest(dir, "sweep", config, {"grid_sweep.csv"},
                           json{{"axis", "grid"}});
        } else if (options.sweep_axis == "stddev") {
            std::vector<double> levels = options.levels;
            if (levels.empty())
                levels = {0.0, 0.02, 0.05, 0.10};
            const auto rows = stddev_sweep(config, levels);
            write_stddev_sweep_csv((dir / "stddev_sweep.csv").string(), rows);
            write_manifest(dir, "sweep", config, {"stddev_sweep.csv"},
                           json{{"axis", "stddev"}, {"levels", levels}});
        } else {
            throw ConfigError("sweep: axis must be \"grid\" or \"stddev\" (got \"" +
                              options.sweep_axis + "\")");
        }
    });
}

int run_ensemble(const CliOptions& options) {
    return guarded([&] {
        const ScenarioConfig config = resolve_config(options);
        const auto dir = resolve_out_dir(options, config);

        std::vector<double> levels = options.levels;
        if (levels.empty())
            levels = {0.01, 0.03, 0.05};
        const int samples = options.samples.value_or(200);
        if (samples < 1 || samples > 1000)
            throw ConfigError("ensemble: samples must lie in [1, 1000] (got " +
                              std::to_string(samples) + ")");

        // Freeze hyperparameters once on the clean scenario, then reuse them
        // for every noise level.
        std::optional<Hyperparams> fixed = config.fixed_hyper;
        if (!fixed) {
            ScenarioConfig base = config;
            base.noise_frac = 0.0;
            const double sigma_star_frac = base.fmcw.sigma_star;
            base.fmcw.sigma_star = 0.0;
            SyntheticData data = generate_synthetic_data(base, base.seed);
            data.points.sigma_star =
                sigma_star_frac * data.clean_point_values.array().abs().mean();
            fixed = reconstruct(base, data, config.model, config.kernel).post.hyper;
        }

        std::vector<EnsembleStats> all_stats;
        std::vector<std::string> outputs = {"ensemble_stats.csv"};
        for (double level : levels) {
            const EnsembleStats stats =
                noise_ensemble(config, config.model, level, samples, config.seed, fixed);
            all_stats.push_back(stats);

            const std::string tok = level_token(level);
            const std::string samples_name = "ensemble_samples_" + tok + ".csv";
            write_ensemble_samples_csv((dir / samples_name).string(), stats);
            outputs.push_back(samples_name);
            for (auto [metric, values] :
                 {std::pair<const char*, const std::vector<double>*>{"xi_max", &stats.xi_max},
                  {"xi_bar", &stats.xi_bar},
                  {"rrmse", &stats.rrmse}}) {
                const std::string hist_name = "hist_" + std::string(metric) + "_" + tok + ".csv";
                write_histogram_csv((dir / hist_name).string(), histogram_fd(*values));
                outputs.push_back(hist_name);
            }
        }
        write_ensemble_stats_csv((dir / "ensemble_stats.csv").string(), all_stats);
        write_manifest(dir, "ensemble", config, outputs,
                       json{{"levels", levels},
                            {"samples", samples},
                            {"sigma", fixed->sigma},
                            {"length", fixed->length}});
    });
}

} // namespace tomo
