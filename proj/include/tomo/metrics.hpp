#pragma once

#include <Eigen/Dense>

#include "tomo/posterior.hpp"
#include "tomo/synthetic.hpp"

namespace tomo {

/// Reconstruction-vs-truth error measures over the m grid nodes:
///
///   rrmse  = sqrt( (1/m) sum_i (F_i - T_i)^2 / sum_i T_i^2 )
///   xi_i   = |F_i - T_i| / max(T)
///   xi_bar = mean(xi),  xi_max = max(xi)
struct Metrics {
    double rrmse = 0.0;
    double xi_bar = 0.0;
    double xi_max = 0.0;
    Eigen::VectorXd xi; // per-node relative error, >= 0
};

Metrics compute_metrics(const Eigen::VectorXd& recon, const SyntheticField& truth);

/// Residuals of the posterior mean projected back into measurement space.
/// relative_norm = ||R mu - d|| / ||d||, or the absolute norm when ||d|| = 0.
struct BackProjectionCheck {
    Eigen::VectorXd residuals;
    double relative_norm = 0.0;
};

BackProjectionCheck back_projection_check(const Eigen::MatrixXd& contrib,
                                          const PosteriorResult& result,
                                          const LineMeasurements& meas);

} // namespace tomo
