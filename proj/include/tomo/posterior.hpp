#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "tomo/gp.hpp"
#include "tomo/synthetic.hpp"

namespace tomo {

enum class ModelTag { Single, Integrated };

const char* to_string(ModelTag tag);
const char* to_string(KernelKind kind);

/// Floor for zero assumed variances, relative to (max|d|)^2. Keeps the
/// likelihood proper when the configured standard deviation is 0.
inline constexpr double kVarianceFloorRel = 1e-6;

inline constexpr double kDefaultMaskFactor = 1e-3;

/// Scales row i and column i of the covariance by `factor` for every node
/// outside the LCFS (psi >= 1); diagonal entries pick up factor^2. Symmetry
/// and positive semidefiniteness are preserved (congruence with a diagonal
/// matrix), so the prior is pinned near zero outside the plasma.
Eigen::MatrixXd mask_covariance_outside_lcfs(Eigen::MatrixXd cov, const FluxMap& map,
                                             double factor);

struct PosteriorResult {
    GaussianField field;             // posterior mean and covariance
    Eigen::VectorXd node_std;        // sqrt(diag(cov)), >= 0
    Eigen::VectorXd back_projection; // R * mean, one entry per chord
    ModelTag model = ModelTag::Single;
    Hyperparams hyper;
    double log_evidence = 0.0; // log N(d; R mu, R Sigma R^T + Sigma_d)
};

/// Gaussian fusion of line-integral data d with a Gaussian field (mu, Sigma):
///
///   mu_post    = mu + Sigma R^T S^-1 (d - R mu),   S = R Sigma R^T + Sigma_d
///   Sigma_post = Sigma - Sigma R^T S^-1 R Sigma
///
/// This data-space form is algebraically identical to the information form
/// (R^T Sigma_d^-1 R + Sigma^-1)^-1 but stays valid when Sigma is singular,
/// which masking makes it. Zero assumed variances are floored (see
/// kVarianceFloorRel). With k = 0 chords the input field is returned as the
/// posterior.
PosteriorResult fuse(const GaussianField& field, const Eigen::MatrixXd& contrib,
                     const LineMeasurements& meas, ModelTag tag, Hyperparams hyper);

/// fuse() with the (masked) prior: the line-integral-only model.
PosteriorResult single_posterior(const GaussianField& prior, const Eigen::MatrixXd& contrib,
                                 const LineMeasurements& meas, Hyperparams hyper);

/// fuse() with the point-conditioned field from gp_condition.
PosteriorResult integrated_posterior(const GaussianField& conditional,
                                     const Eigen::MatrixXd& contrib,
                                     const LineMeasurements& meas, Hyperparams hyper);

/// Information-form evaluation, requiring an invertible field covariance:
///
///   Sigma_post = (R^T Sigma_d^-1 R + Sigma^-1)^-1
///   mu_post    = mu + Sigma_post R^T Sigma_d^-1 (d - R mu)
///
/// Kept as an independent algebraic route; must agree with fuse() whenever
/// the covariance is well-conditioned.
PosteriorResult fuse_information_form(const GaussianField& field, const Eigen::MatrixXd& contrib,
                                      const LineMeasurements& meas, ModelTag tag,
                                      Hyperparams hyper);

/// log N(d; R mu, R Sigma R^T + Sigma_d), the marginal likelihood of the data
/// under the field entering the fusion. Returns 0 for k = 0 (empty product).
double log_evidence(const GaussianField& field, const Eigen::MatrixXd& contrib,
                    const LineMeasurements& meas);

/// Log-spaced hyperparameter candidates for the evidence grid search.
struct EvidenceSearchSpace {
    std::vector<double> sigmas;
    std::vector<double> lengths;
};

/// sigma spans [0.1, 10] x field_scale over 7 values; length spans [0.02, 2]
/// (flux units) or [0.05, 2] m (spatial) over 9 values.
EvidenceSearchSpace default_search_space(KernelKind kind, double field_scale);

std::vector<double> log_spaced(double lo, double hi, int count);

struct EvidencePoint {
    double sigma, length, log_ev;
};

struct EvidenceSearchResult {
    Hyperparams best;
    double best_log_ev = 0.0;
    std::vector<EvidencePoint> surface; // one row per (sigma, length) candidate
};

/// Exhaustive evidence maximization over the candidate grid. `build_field`
/// rebuilds the prior or conditional for each candidate. Candidates whose
/// factorization fails score -inf; ties break toward larger length (smoother
/// field). Throws NumericalError when every candidate fails.
EvidenceSearchResult optimize_hyperparams(
    const EvidenceSearchSpace& space,
    const std::function<GaussianField(const Hyperparams&)>& build_field,
    const Eigen::MatrixXd& contrib, const LineMeasurements& meas);

} // namespace tomo
