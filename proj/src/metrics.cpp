#include "tomo/metrics.hpp"

#include <cmath>
#include <string>

#include "tomo/errors.hpp"

namespace tomo {

Metrics compute_metrics(const Eigen::VectorXd& recon, const SyntheticField& truth) {
    const Eigen::Index m = recon.size();
    if (m != static_cast<Eigen::Index>(truth.values.size()))
        throw std::invalid_argument("compute_metrics: reconstruction length " +
                                    std::to_string(m) + " does not match truth length " +
                                    std::to_string(truth.values.size()));
    if (!(truth.max_value > 0.0))
        throw std::invalid_argument("compute_metrics: truth maximum must be > 0");

    const Eigen::Map<const Eigen::VectorXd> target(truth.values.data(), m);
    const Eigen::VectorXd diff = recon - target;

    Metrics metrics;
    metrics.xi = (diff.array().abs() / truth.max_value).matrix();
    metrics.xi_bar = metrics.xi.mean();
    metrics.xi_max = metrics.xi.maxCoeff();
    metrics.rrmse = std::sqrt(diff.squaredNorm() / static_cast<double>(m) / target.squaredNorm());
    return metrics;
}

BackProjectionCheck back_projection_check(const Eigen::MatrixXd& contrib,
                                          const PosteriorResult& result,
                                          const LineMeasurements& meas) {
    if (contrib.cols() != result.field.size() || contrib.rows() != meas.values.size())
        throw std::invalid_argument("back_projection_check: dimension mismatch");

    BackProjectionCheck check;
    check.residuals = contrib * result.field.mean - meas.values;
    const double data_norm = meas.values.norm();
    check.relative_norm =
        data_norm > 0.0 ? check.residuals.norm() / data_norm : check.residuals.norm();
    return check;
}

} // namespace tomo
