#include "tomo/gp.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tomo/errors.hpp"
#include "tomo/linalg.hpp"

namespace tomo {

KernelSpec spatial_se_kernel(Hyperparams hyper) {
    KernelSpec spec{KernelKind::SpatialSE, hyper, std::nullopt};
    validate(spec);
    return spec;
}

KernelSpec flux_se_kernel(Hyperparams hyper, const FluxModel& model) {
    KernelSpec spec{KernelKind::FluxSE, hyper, model};
    validate(spec);
    return spec;
}

void validate(const KernelSpec& spec) {
    if (!(spec.hyper.sigma > 0.0))
        throw ConfigError("kernel: sigma must be > 0 (got " + std::to_string(spec.hyper.sigma) + ")");
    if (!(spec.hyper.length > 0.0))
        throw ConfigError("kernel: length must be > 0 (got " + std::to_string(spec.hyper.length) + ")");
    if (spec.kind == KernelKind::FluxSE && !spec.flux.has_value())
        throw ConfigError("kernel: the flux kernel requires a flux model");
    if (spec.kind == KernelKind::SpatialSE && spec.flux.has_value())
        throw ConfigError("kernel: the spatial kernel must not carry a flux model");
    if (spec.flux)
        validate(*spec.flux);
}

double se_kernel(double dist, const Hyperparams& hyper) {
    const double u = dist / hyper.length;
    return hyper.sigma * hyper.sigma * std::exp(-0.5 * u * u);
}

double kernel_distance(const KernelSpec& spec, Point p, Point q) {
    if (spec.kind == KernelKind::SpatialSE) {
        const double dr = p.r - q.r;
        const double dz = p.z - q.z;
        return std::sqrt(dr * dr + dz * dz);
    }
    return std::abs(normalized_flux(*spec.flux, p) - normalized_flux(*spec.flux, q));
}

namespace {

bool same_coords(std::span<const Point> a, std::span<const Point> b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].r != b[i].r || a[i].z != b[i].z)
            return false;
    return true;
}

} // namespace

Eigen::MatrixXd covariance_matrix(const KernelSpec& spec, std::span<const Point> a,
                                  std::span<const Point> b) {
    validate(spec);
    if (a.empty() || b.empty())
        throw std::invalid_argument("covariance_matrix: coordinate lists must be nonempty");

    const double s2 = spec.hyper.sigma * spec.hyper.sigma;
    const double inv_2l2 = 0.5 / (spec.hyper.length * spec.hyper.length);
    Eigen::MatrixXd cov(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));

    if (spec.kind == KernelKind::FluxSE) {
        // The flux kernel only sees psi, so precompute the 1D features.
        std::vector<double> pa(a.size()), pb(b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            pa[i] = normalized_flux(*spec.flux, a[i]);
        for (std::size_t j = 0; j < b.size(); ++j)
            pb[j] = normalized_flux(*spec.flux, b[j]);
        for (std::size_t j = 0; j < b.size(); ++j)
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = pa[i] - pb[j];
                cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    s2 * std::exp(-d * d * inv_2l2);
            }
    } else {
        for (std::size_t j = 0; j < b.size(); ++j)
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double dr = a[i].r - b[j].r;
                const double dz = a[i].z - b[j].z;
                cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    s2 * std::exp(-(dr * dr + dz * dz) * inv_2l2);
            }
    }

    if (same_coords(a, b))
        cov.diagonal().array() += kJitterRel * s2;
    return cov;
}

GaussianField gp_prior(const KernelSpec& spec, std::span<const Point> coords) {
    GaussianField field;
    field.cov = covariance_matrix(spec, coords, coords);
    field.mean = Eigen::VectorXd::Zero(field.cov.rows());
    return field;
}

GaussianField gp_condition(const KernelSpec& spec, std::span<const Point> coords,
                           const PointMeasurements& pts) {
    GaussianField prior = gp_prior(spec, coords);
    if (pts.empty())
        return prior;
    if (pts.values.size() != static_cast<Eigen::Index>(pts.locations.size()))
        throw std::invalid_argument("gp_condition: point values and locations differ in length");
    if (pts.sigma_star < 0.0)
        throw std::invalid_argument("gp_condition: sigma_star must be >= 0");

    const double s2 = spec.hyper.sigma * spec.hyper.sigma;
    Eigen::MatrixXd obs = covariance_matrix(spec, pts.locations, pts.locations);
    obs.diagonal().array() += pts.sigma_star * pts.sigma_star;

    // cross(i, j) = k(location_i, coord_j)
    const Eigen::MatrixXd cross = covariance_matrix(spec, pts.locations, coords);

    const auto llt =
        cholesky_spd(std::move(obs), 10.0 * kJitterRel * s2, kJitterMaxRel * s2, "gp_condition");
    const Eigen::VectorXd weights = llt.solve(pts.values);
    const Eigen::MatrixXd propagated = llt.solve(cross);

    GaussianField out;
    out.mean = cross.transpose() * weights;
    out.cov = prior.cov - cross.transpose() * propagated;
    symmetrize(out.cov);
    return out;
}

GaussianField gp_condition(const KernelSpec& spec, const Grid& grid,
                           const PointMeasurements& pts) {
    return gp_condition(spec, std::span<const Point>(grid.nodes()), pts);
}

} // namespace tomo
