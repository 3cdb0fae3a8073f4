#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace tomo {

/// Cholesky factorization with diagonal jitter escalation: on failure, adds
/// `jitter0` to the diagonal and retries with x10 steps up to `jitter_max`
/// (absolute additions). Throws NumericalError with conditioning context when
/// the cap is reached.
Eigen::LLT<Eigen::MatrixXd> cholesky_spd(Eigen::MatrixXd a, double jitter0, double jitter_max,
                                         const char* context);

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt);

/// Replaces a with (a + a^T)/2, removing the asymmetry drift of repeated
/// solve/multiply round trips.
void symmetrize(Eigen::MatrixXd& a);

} // namespace tomo
