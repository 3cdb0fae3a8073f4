#include "tomo/posterior.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tomo/errors.hpp"
#include "tomo/linalg.hpp"

namespace tomo {

const char* to_string(ModelTag tag) {
    return tag == ModelTag::Single ? "single" : "integrated";
}

const char* to_string(KernelKind kind) {
    return kind == KernelKind::SpatialSE ? "spatial" : "flux";
}

Eigen::MatrixXd mask_covariance_outside_lcfs(Eigen::MatrixXd cov, const FluxMap& map,
                                             double factor) {
    if (cov.rows() != cov.cols() || cov.rows() != static_cast<Eigen::Index>(map.psi.size()))
        throw std::invalid_argument("mask_covariance_outside_lcfs: dimension mismatch");
    if (!(factor > 0.0 && factor <= 1.0))
        throw ConfigError("mask factor must lie in (0, 1]");

    Eigen::VectorXd weights = Eigen::VectorXd::Ones(cov.rows());
    for (Eigen::Index i = 0; i < cov.rows(); ++i)
        if (map.psi[static_cast<std::size_t>(i)] >= 1.0)
            weights[i] = factor;

    cov = weights.asDiagonal() * cov * weights.asDiagonal();
    return cov;
}

namespace {

void check_fusion_dims(const GaussianField& field, const Eigen::MatrixXd& contrib,
                       const LineMeasurements& meas) {
    if (field.cov.rows() != field.cov.cols() || field.cov.rows() != field.mean.size())
        throw std::invalid_argument("fuse: field mean/covariance dimensions disagree");
    if (contrib.cols() != field.size())
        throw std::invalid_argument("fuse: contribution matrix has " +
                                    std::to_string(contrib.cols()) + " columns for " +
                                    std::to_string(field.size()) + " field nodes");
    if (meas.values.size() != contrib.rows() || meas.variances.size() != contrib.rows())
        throw std::invalid_argument("fuse: measurement length does not match chord count");
}

Eigen::VectorXd floored_variances(const LineMeasurements& meas) {
    const double max_abs = meas.values.size() > 0 ? meas.values.array().abs().maxCoeff() : 0.0;
    const double floor = kVarianceFloorRel * max_abs * max_abs;
    Eigen::VectorXd variances = meas.variances;
    for (Eigen::Index j = 0; j < variances.size(); ++j) {
        if (variances[j] < 0.0)
            throw std::invalid_argument("fuse: negative measurement variance");
        if (variances[j] == 0.0)
            variances[j] = floor;
    }
    return variances;
}

Eigen::LLT<Eigen::MatrixXd> factor_marginal(Eigen::MatrixXd marginal, const char* context) {
    const double scale = std::max(marginal.diagonal().mean(), 1e-300);
    return cholesky_spd(std::move(marginal), 1e-12 * scale, 1e-6 * scale, context);
}

PosteriorResult finalize(GaussianField field, const Eigen::MatrixXd& contrib, ModelTag tag,
                         Hyperparams hyper, double log_ev) {
    PosteriorResult result;
    result.node_std = field.cov.diagonal().array().max(0.0).sqrt().matrix();
    result.back_projection = contrib * field.mean;
    result.field = std::move(field);
    result.model = tag;
    result.hyper = hyper;
    result.log_evidence = log_ev;
    return result;
}

double gaussian_log_density(const Eigen::LLT<Eigen::MatrixXd>& llt,
                            const Eigen::VectorXd& residual) {
    const double quad = residual.dot(llt.solve(residual));
    const double k = static_cast<double>(residual.size());
    return -0.5 * (k * std::log(2.0 * std::numbers::pi) + log_det_from_llt(llt) + quad);
}

} // namespace

PosteriorResult fuse(const GaussianField& field, const Eigen::MatrixXd& contrib,
                     const LineMeasurements& meas, ModelTag tag, Hyperparams hyper) {
    check_fusion_dims(field, contrib, meas);
    if (contrib.rows() == 0)
        return finalize(field, contrib, tag, hyper, 0.0);

    const Eigen::VectorXd variances = floored_variances(meas);
    const Eigen::MatrixXd cross = field.cov * contrib.transpose(); // Sigma R^T, m x k
    Eigen::MatrixXd marginal = contrib * cross;                    // R Sigma R^T
    marginal.diagonal() += variances;
    symmetrize(marginal);

    const auto llt = factor_marginal(std::move(marginal), "fuse");
    const Eigen::VectorXd residual = meas.values - contrib * field.mean;

    GaussianField post;
    post.mean = field.mean + cross * llt.solve(residual);
    post.cov = field.cov - cross * llt.solve(cross.transpose());
    symmetrize(post.cov);

    return finalize(std::move(post), contrib, tag, hyper, gaussian_log_density(llt, residual));
}

PosteriorResult single_posterior(const GaussianField& prior, const Eigen::MatrixXd& contrib,
                                 const LineMeasurements& meas, Hyperparams hyper) {
    return fuse(prior, contrib, meas, ModelTag::Single, hyper);
}

PosteriorResult integrated_posterior(const GaussianField& conditional,
                                     const Eigen::MatrixXd& contrib,
                                     const LineMeasurements& meas, Hyperparams hyper) {
    return fuse(conditional, contrib, meas, ModelTag::Integrated, hyper);
}

PosteriorResult fuse_information_form(const GaussianField& field, const Eigen::MatrixXd& contrib,
                                      const LineMeasurements& meas, ModelTag tag,
                                      Hyperparams hyper) {
    check_fusion_dims(field, contrib, meas);
    const double log_ev = log_evidence(field, contrib, meas);
    if (contrib.rows() == 0)
        return finalize(field, contrib, tag, hyper, log_ev);

    const Eigen::VectorXd variances = floored_variances(meas);
    const Eigen::VectorXd inv_var = variances.cwiseInverse();

    const auto prior_llt = factor_marginal(field.cov, "fuse_information_form(prior)");
    Eigen::MatrixXd info = contrib.transpose() * inv_var.asDiagonal() * contrib +
                           prior_llt.solve(Eigen::MatrixXd::Identity(field.size(), field.size()));
    symmetrize(info);
    const auto info_llt = factor_marginal(std::move(info), "fuse_information_form");

    const Eigen::VectorXd residual = meas.values - contrib * field.mean;
    GaussianField post;
    post.cov = info_llt.solve(Eigen::MatrixXd::Identity(field.size(), field.size()));
    symmetrize(post.cov);
    post.mean = field.mean + post.cov * (contrib.transpose() * (inv_var.asDiagonal() * residual));

    return finalize(std::move(post), contrib, tag, hyper, log_ev);
}

double log_evidence(const GaussianField& field, const Eigen::MatrixXd& contrib,
                    const LineMeasurements& meas) {
    check_fusion_dims(field, contrib, meas);
    if (contrib.rows() == 0)
        return 0.0;

    const Eigen::VectorXd variances = floored_variances(meas);
    Eigen::MatrixXd marginal = contrib * field.cov * contrib.transpose();
    marginal.diagonal() += variances;
    symmetrize(marginal);

    const auto llt = factor_marginal(std::move(marginal), "log_evidence");
    return gaussian_log_density(llt, meas.values - contrib * field.mean);
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi >= lo) || count < 1)
        throw ConfigError("log_spaced: need 0 < lo <= hi and count >= 1");
    std::vector<double> values(static_cast<std::size_t>(count));
    if (count == 1) {
        values[0] = lo;
        return values;
    }
    const double step = (std::log(hi) - std::log(lo)) / (count - 1);
    for (int i = 0; i < count; ++i)
        values[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + i * step);
    return values;
}

EvidenceSearchSpace default_search_space(KernelKind kind, double field_scale) {
    EvidenceSearchSpace space;
    space.sigmas = log_spaced(0.1 * field_scale, 10.0 * field_scale, 7);
    space.lengths = kind == KernelKind::FluxSE ? log_spaced(0.02, 2.0, 9)
                                               : log_spaced(0.05, 2.0, 9);
    return space;
}

EvidenceSearchResult optimize_hyperparams(
    const EvidenceSearchSpace& space,
    const std::function<GaussianField(const Hyperparams&)>& build_field,
    const Eigen::MatrixXd& contrib, const LineMeasurements& meas) {
    if (space.sigmas.empty() || space.lengths.empty())
        throw ConfigError("evidence search: candidate lists must be nonempty");

    constexpr double kFailed = -std::numeric_limits<double>::infinity();
    EvidenceSearchResult result;
    result.best_log_ev = kFailed;
    result.surface.reserve(space.sigmas.size() * space.lengths.size());

    for (double sigma : space.sigmas) {
        for (double length : space.lengths) {
            const Hyperparams hyper{sigma, length};
            double log_ev = kFailed;
            try {
                log_ev = log_evidence(build_field(hyper), contrib, meas);
            } catch (const NumericalError&) {
                // recorded as -inf; the candidate simply loses the argmax
            }
            result.surface.push_back({sigma, length, log_ev});

            const bool better =
                log_ev > result.best_log_ev ||
                (log_ev == result.best_log_ev &&
                 (length > result.best.length ||
                  (length == result.best.length && sigma > result.best.sigma)));
            if (better && log_ev != kFailed) {
                result.best = hyper;
                result.best_log_ev = log_ev;
            }
        }
    }

    if (result.best_log_ev == kFailed)
        throw NumericalError("evidence search: every candidate failed factorization");
    return result;
}

} // namespace tomo
