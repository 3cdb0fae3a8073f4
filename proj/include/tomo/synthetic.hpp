#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tomo/flux.hpp"
#include "tomo/geometry.hpp"

namespace tomo {

/// Modified-tanh pedestal profile parameters. Densities are in units of
/// 1e19 m^-3; the profile coordinate is rho = sqrt(psi).
struct MtanhParams {
    double amplitude = 2.0; // A: density scale
    double offset = 2.0;    // B: density offset
    double xsym = 0.95;     // barrier center in rho
    double hwid = 0.05;     // barrier half-width in rho
    double alpha = 0.1;     // core slope coefficient
};

void validate(const MtanhParams& params);

/// ((1 + alpha*z) e^z - e^-z) / (e^z + e^-z), evaluated with the growing
/// exponential factored out so large |z| cannot overflow.
double mtanh(double alpha, double z);

/// Pedestal density at rho: max(0, A * mtanh(alpha, (xsym - rho)/hwid) + B).
double pedestal_density(double rho, const MtanhParams& params);

/// Ground-truth density at every grid node (a pure function of psi).
struct SyntheticField {
    std::vector<double> values; // length m, all >= 0
    double max_value = 0.0;     // > 0
};

/// Throws NumericalError when the clamped profile is identically zero.
SyntheticField synthesize_field(const Grid& grid, const FluxModel& model,
                                const MtanhParams& params);

/// d = R * F (noise-free line integrals).
Eigen::VectorXd forward_project(const ContributionMatrix& contrib, const Eigen::VectorXd& field);

/// Chord-integrated data with its assumed per-channel variances (the diagonal
/// of the likelihood covariance).
struct LineMeasurements {
    Eigen::VectorXd values;     // d, length k [density * m]
    Eigen::VectorXd variances;  // diagonal of the likelihood covariance, >= 0
    std::vector<int> channels;  // channel ids the rows correspond to
};

/// variance_j = (std_frac * |d_j|)^2 from the clean signal; the returned data
/// is d_j * (1 + noise_frac * g_j) with g ~ N(0,1). The assumed variance never
/// depends on the noise realization.
LineMeasurements apply_measurement_model(const Eigen::VectorXd& clean, double std_frac,
                                         double noise_frac, std::mt19937_64& rng);

/// Local density values from the reflectometer detection zone.
struct PointMeasurements {
    std::vector<Point> locations; // low-field-side midplane points
    Eigen::VectorXd values;       // v*, same length
    double sigma_star = 0.0;      // homoscedastic noise std [density units]

    bool empty() const { return locations.empty(); }
};

/// `count` points on the low-field-side midplane (Z = Z0, R > R0) with psi
/// uniformly spaced on [0.6, 1.0). Values are the true profile densities plus
/// multiplicative Gaussian noise of std sigma_star_frac * (local density);
/// the recorded scalar sigma_star is sigma_star_frac * mean(|true density|).
PointMeasurements sample_fmcw(const FluxModel& model, const MtanhParams& params, int count,
                              double sigma_star_frac, std::mt19937_64& rng);

} // namespace tomo
