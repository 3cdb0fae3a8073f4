#include "tomo/linalg.hpp"

#include <cmath>
#include <string>

#include "tomo/errors.hpp"

namespace tomo {

Eigen::LLT<Eigen::MatrixXd> cholesky_spd(Eigen::MatrixXd a, double jitter0, double jitter_max,
                                         const char* context) {
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success)
        return llt;

    double added = 0.0;
    for (double jitter = jitter0; jitter <= jitter_max * (1.0 + 1e-12); jitter *= 10.0) {
        a.diagonal().array() += jitter - added;
        added = jitter;
        llt.compute(a);
        if (llt.info() == Eigen::Success)
            return llt;
    }

    const double mean_diag = a.diagonal().mean();
    throw NumericalError(std::string(context) +
                         ": Cholesky factorization failed after jitter escalation to " +
                         std::to_string(added) + " (n=" + std::to_string(a.rows()) +
                         ", mean diagonal=" + std::to_string(mean_diag) + ")");
}

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

void symmetrize(Eigen::MatrixXd& a) {
    a = 0.5 * (a + a.transpose()).eval();
}

} // namespace tomo
