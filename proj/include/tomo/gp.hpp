#pragma once

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "tomo/flux.hpp"
#include "tomo/geometry.hpp"
#include "tomo/synthetic.hpp"

namespace tomo {

struct Hyperparams {
    double sigma = 1.0;  // amplitude (field units)
    double length = 1.0; // correlation length: meters (spatial) or psi units (flux)
};

enum class KernelKind { SpatialSE, FluxSE };

/// Squared-exponential kernel over either the poloidal-plane Euclidean
/// distance or the 1D normalized-flux distance |psi(p) - psi(q)|. The flux
/// variant carries the flux model that maps (R, Z) points to psi; two points
/// on the same flux surface are perfectly correlated under it.
struct KernelSpec {
    KernelKind kind = KernelKind::SpatialSE;
    Hyperparams hyper;
    std::optional<FluxModel> flux; // required iff kind == FluxSE
};

KernelSpec spatial_se_kernel(Hyperparams hyper);
KernelSpec flux_se_kernel(Hyperparams hyper, const FluxModel& model);
void validate(const KernelSpec& spec);

/// sigma^2 * exp(-dist^2 / (2 l^2))
double se_kernel(double dist, const Hyperparams& hyper);

double kernel_distance(const KernelSpec& spec, Point p, Point q);

inline constexpr double kJitterRel = 1e-8;    // initial diagonal jitter, x sigma^2
inline constexpr double kJitterMaxRel = 1e-4; // escalation cap, x sigma^2

/// Kernel matrix k(a_i, b_j). When the two coordinate lists are identical the
/// diagonal receives jitter kJitterRel * sigma^2 for factorization stability.
Eigen::MatrixXd covariance_matrix(const KernelSpec& spec, std::span<const Point> a,
                                  std::span<const Point> b);

/// A Gaussian distribution over field values: the prior, the point-conditioned
/// field, or the posterior. Covariance is symmetric and PSD up to jitter.
struct GaussianField {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;

    Eigen::Index size() const { return mean.size(); }
};

/// Zero-mean prior over the given coordinates.
GaussianField gp_prior(const KernelSpec& spec, std::span<const Point> coords);

/// Conditions the zero-mean prior on noisy point values:
///
///   mean = S*^T (S** + sigma*^2 I)^-1 v*
///   cov  = S   - S*^T (S** + sigma*^2 I)^-1 S*
///
/// where S is the kernel matrix over `coords`, S** over the measurement
/// locations and S* between them. Solved by Cholesky factorization with
/// jitter escalation; no explicit inverse. With no measurements the prior is
/// returned unchanged.
GaussianField gp_condition(const KernelSpec& spec, std::span<const Point> coords,
                           const PointMeasurements& pts);
GaussianField gp_condition(const KernelSpec& spec, const Grid& grid,
                           const PointMeasurements& pts);

} // namespace tomo
