#include "tomo/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tomo/errors.hpp"

namespace tomo {

void validate(const MtanhParams& params) {
    if (!(params.hwid > 0.0))
        throw ConfigError("mtanh: hwid must be > 0 (got " + std::to_string(params.hwid) + ")");
    if (!(params.amplitude > 0.0))
        throw ConfigError("mtanh: amplitude must be > 0 (got " +
                          std::to_string(params.amplitude) + ")");
}

double mtanh(double alpha, double z) {
    if (z >= 0.0) {
        const double w = std::exp(-2.0 * z);
        return ((1.0 + alpha * z) - w) / (1.0 + w);
    }
    const double w = std::exp(2.0 * z);
    return ((1.0 + alpha * z) * w - 1.0) / (w + 1.0);
}

double pedestal_density(double rho, const MtanhParams& params) {
    const double z = (params.xsym - rho) / params.hwid;
    return std::max(0.0, params.amplitude * mtanh(params.alpha, z) + params.offset);
}

SyntheticField synthesize_field(const Grid& grid, const FluxModel& model,
                                const MtanhParams& params) {
    validate(model);
    validate(params);

    SyntheticField field;
    field.values.reserve(static_cast<std::size_t>(grid.node_count()));
    for (const Point& node : grid.nodes()) {
        const double rho = std::sqrt(normalized_flux(model, node));
        field.values.push_back(pedestal_density(rho, params));
    }
    field.max_value = *std::max_element(field.values.begin(), field.values.end());
    if (!(field.max_value > 0.0))
        throw NumericalError("synthetic field is identically zero after clamping");
    return field;
}

Eigen::VectorXd forward_project(const ContributionMatrix& contrib, const Eigen::VectorXd& field) {
    if (contrib.entries.cols() != field.size())
        throw std::invalid_argument("forward_project: field length " +
                                    std::to_string(field.size()) + " does not match " +
                                    std::to_string(contrib.entries.cols()) + " grid nodes");
    return contrib.entries * field;
}

LineMeasurements apply_measurement_model(const Eigen::VectorXd& clean, double std_frac,
                                         double noise_frac, std::mt19937_64& rng) {
    if (std_frac < 0.0 || noise_frac < 0.0)
        throw ConfigError("measurement model: std_frac and noise_frac must be >= 0");

    LineMeasurements meas;
    meas.values = clean;
    meas.variances = (std_frac * clean.array().abs()).square().matrix();
    meas.channels.resize(static_cast<std::size_t>(clean.size()));
    std::iota(meas.channels.begin(), meas.channels.end(), 0);

    if (noise_frac > 0.0) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (Eigen::Index j = 0; j < meas.values.size(); ++j)
            meas.values[j] = clean[j] * (1.0 + noise_frac * gauss(rng));
    }
    return meas;
}

namespace {

// Midplane radius with normalized_flux == target, on the low-field side.
// The bracket [r0, r0 + a] always contains it: psi(r0 + a, z0) == 1 for any
// shift, because the shift term vanishes on the LCFS.
double midplane_radius_for_psi(const FluxModel& model, double target) {
    const Point axis{model.r0, model.z0};
    if (normalized_flux(model, axis) >= target)
        throw ConfigError("fmcw: detection zone is empty for this flux model");
    if (model.shift == 0.0)
        return model.r0 + model.a * std::sqrt(target);

    double lo = model.r0, hi = model.r0 + model.a;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        (normalized_flux(model, {mid, model.z0}) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

PointMeasurements sample_fmcw(const FluxModel& model, const MtanhParams& params, int count,
                              double sigma_star_frac, std::mt19937_64& rng) {
    if (count < 1)
        throw ConfigError("fmcw: count must be >= 1 (got " + std::to_string(count) + ")");
    if (sigma_star_frac < 0.0)
        throw ConfigError("fmcw: sigma_star must be >= 0");
    validate(model);

    PointMeasurements pts;
    pts.locations.reserve(static_cast<std::size_t>(count));
    Eigen::VectorXd truth(count);
    for (int i = 0; i < count; ++i) {
        const double target = 0.6 + 0.4 * static_cast<double>(i) / count;
        const double r = midplane_radius_for_psi(model, target);
        const Point loc{r, model.z0};
        pts.locations.push_back(loc);
        truth[i] = pedestal_density(std::sqrt(normalized_flux(model, loc)), params);
    }

    pts.values = truth;
    pts.sigma_star = sigma_star_frac * truth.array().abs().mean();
    if (sigma_star_frac > 0.0) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int i = 0; i < count; ++i)
            pts.values[i] = truth[i] * (1.0 + sigma_star_frac * gauss(rng));
    }
    return pts;
}

} // namespace tomo
