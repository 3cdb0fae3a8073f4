#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "tomo/errors.hpp"
#include "tomo/pipeline.hpp"
#include "tomo/posterior.hpp"

using namespace tomo;

namespace {

LineMeasurements make_meas(const Eigen::VectorXd& d, const Eigen::VectorXd& var) {
    LineMeasurements meas;
    meas.values = d;
    meas.variances = var;
    meas.channels.resize(static_cast<std::size_t>(d.size()));
    for (std::size_t j = 0; j < meas.channels.size(); ++j)
        meas.channels[j] = static_cast<int>(j);
    return meas;
}

GaussianField small_field(int n, double sigma, double length, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i)
        pts.push_back({uni(rng), uni(rng)});
    return gp_prior(spatial_se_kernel({sigma, length}), pts);
}

} // namespace

TEST_CASE("masking scales rows and columns outside the LCFS") {
    Eigen::MatrixXd cov(2, 2);
    cov << 4.0, 1.0, 1.0, 3.0;

    SUBCASE("all nodes inside leaves the matrix untouched") {
        const FluxMap map{{0.2, 0.8}};
        const Eigen::MatrixXd masked = mask_covariance_outside_lcfs(cov, map, 1e-3);
        CHECK((masked - cov).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("factor one leaves the matrix untouched") {
        const FluxMap map{{0.2, 1.5}};
        const Eigen::MatrixXd masked = mask_covariance_outside_lcfs(cov, map, 1.0);
        CHECK((masked - cov).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("one outside node scales its diagonal quadratically") {
        const FluxMap map{{0.2, 1.5}};
        const Eigen::MatrixXd masked = mask_covariance_outside_lcfs(cov, map, 1e-3);
        CHECK(masked(0, 0) == 4.0);
        CHECK(masked(1, 1) == doctest::Approx(3.0e-6).epsilon(1e-12));
        CHECK(masked(0, 1) == doctest::Approx(1.0e-3).epsilon(1e-12));
        CHECK(masked(1, 0) == masked(0, 1));
    }
    SUBCASE("boundary nodes count as outside") {
        const FluxMap map{{1.0, 0.5}};
        const Eigen::MatrixXd masked = mask_covariance_outside_lcfs(cov, map, 1e-3);
        CHECK(masked(0, 0) == doctest::Approx(4.0e-6).epsilon(1e-12));
    }
    SUBCASE("invalid factor is rejected") {
        const FluxMap map{{0.2, 0.8}};
        CHECK_THROWS_AS(mask_covariance_outside_lcfs(cov, map, 0.0), ConfigError);
        CHECK_THROWS_AS(mask_covariance_outside_lcfs(cov, map, 1.5), ConfigError);
    }
}

TEST_CASE("fusion with no chords returns the input field") {
    const GaussianField field = small_field(4, 1.0, 0.4, 11);
    const Eigen::MatrixXd contrib(0, 4);
    const auto post = fuse(field, contrib, make_meas(Eigen::VectorXd(0), Eigen::VectorXd(0)),
                           ModelTag::Single, {1.0, 0.4});
    CHECK((post.field.mean - field.mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK((post.field.cov - field.cov).cwiseAbs().maxCoeff() == 0.0);
    CHECK(post.log_evidence == 0.0);
}

TEST_CASE("huge measurement variance reduces to the prior") {
    const GaussianField field = small_field(5, 1.0, 0.4, 12);
    Eigen::MatrixXd contrib = Eigen::MatrixXd::Random(2, 5).cwiseAbs();
    Eigen::VectorXd d(2);
    d << 3.0, 1.0;
    const Eigen::VectorXd var = Eigen::VectorXd::Constant(2, 1e12);
    const auto post = fuse(field, contrib, make_meas(d, var), ModelTag::Single, {1.0, 0.4});
    CHECK(post.field.mean.cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("zero contribution matrix returns the conditioned field unchanged") {
    const GaussianField field = small_field(4, 1.2, 0.3, 13);
    const Eigen::MatrixXd contrib = Eigen::MatrixXd::Zero(2, 4);
    Eigen::VectorXd d(2);
    d << 0.5, -0.25;
    const Eigen::VectorXd var = Eigen::VectorXd::Constant(2, 0.1);
    const auto post = fuse(field, contrib, make_meas(d, var), ModelTag::Integrated, {1.2, 0.3});
    CHECK((post.field.mean - field.mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK((post.field.cov - field.cov).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("noise-free data is reproduced by the back projection") {
    // wide prior, floored variances: the posterior must fit the data tightly
    const Grid grid(GridSpec{10, 10, 1.1, 2.7, -1.5, 1.5});
    const FluxModel model;
    const MtanhParams params;
    const auto truth = synthesize_field(grid, model, params);
    const auto contrib = contribution_matrix(grid, default_fir_chords());
    const Eigen::VectorXd d = forward_project(
        contrib, Eigen::Map<const Eigen::VectorXd>(truth.values.data(),
                                                   static_cast<Eigen::Index>(truth.values.size())));

    const KernelSpec spec = flux_se_kernel({10.0, 0.15}, model);
    const GaussianField prior = gp_prior(spec, grid.nodes());
    const auto post = fuse(prior, contrib.entries, make_meas(d, Eigen::VectorXd::Zero(d.size())),
                           ModelTag::Single, spec.hyper);
    CHECK((post.back_projection - d).norm() / d.norm() < 0.01);
}

TEST_CASE("information form and data-space form agree") {
    const Grid grid(GridSpec{5, 5, 0.0, 1.0, 0.0, 1.0});
    const std::vector<Chord> chords = {
        {{-1.0, 0.45}, 10.0, true}, {{0.2, -1.0}, 80.0, true}, {{-1.0, 0.8}, -15.0, true}};
    const auto contrib = contribution_matrix(grid, chords);

    const KernelSpec spec = spatial_se_kernel({1.0, 0.3});
    const GaussianField prior = gp_prior(spec, grid.nodes());

    Eigen::VectorXd field_values(grid.node_count());
    for (int i = 0; i < grid.node_count(); ++i)
        field_values[i] = 1.0 + std::sin(3.0 * grid.node(i).r) * std::cos(2.0 * grid.node(i).z);
    const Eigen::VectorXd d = contrib.entries * field_values;
    const Eigen::VectorXd var = (0.05 * d.array().abs()).square().matrix();
    const auto meas = make_meas(d, var);

    const auto data_form = fuse(prior, contrib.entries, meas, ModelTag::Single, spec.hyper);
    const auto info_form =
        fuse_information_form(prior, contrib.entries, meas, ModelTag::Single, spec.hyper);

    const double mean_scale = data_form.field.mean.norm();
    const double cov_scale = data_form.field.cov.norm();
    CHECK((data_form.field.mean - info_form.field.mean).norm() <= 1e-8 * mean_scale);
    CHECK((data_form.field.cov - info_form.field.cov).norm() <= 1e-8 * cov_scale);
}

TEST_CASE("log evidence") {
    SUBCASE("no data means zero log evidence") {
        const GaussianField field = small_field(3, 1.0, 0.5, 14);
        const Eigen::MatrixXd contrib(0, 3);
        CHECK(log_evidence(field, contrib, make_meas(Eigen::VectorXd(0), Eigen::VectorXd(0))) ==
              0.0);
    }
    SUBCASE("scalar case matches the closed form") {
        GaussianField field;
        field.mean = Eigen::VectorXd::Zero(1);
        field.cov = Eigen::MatrixXd::Identity(1, 1);
        Eigen::MatrixXd contrib(1, 1);
        contrib << 1.0;
        Eigen::VectorXd d(1), var(1);
        d << 0.0;
        var << 1.0;
        const double expected = -0.5 * std::log(4.0 * std::numbers::pi);
        CHECK(log_evidence(field, contrib, make_meas(d, var)) ==
              doctest::Approx(expected).epsilon(1e-12));
        CHECK(expected == doctest::Approx(-1.2655).epsilon(1e-4));
    }
    SUBCASE("Monte Carlo estimate agrees on a two-node problem") {
        const std::vector<Point> pts = {{0.0, 0.0}, {0.6, 0.2}};
        const KernelSpec spec = spatial_se_kernel({1.0, 1.0});
        const GaussianField prior = gp_prior(spec, pts);

        Eigen::MatrixXd contrib(1, 2);
        contrib << 0.7, 1.1;
        Eigen::VectorXd d(1), var(1);
        d << 0.8;
        var << 0.5;

        const double exact = log_evidence(prior, contrib, make_meas(d, var));

        const Eigen::MatrixXd chol = prior.cov.llt().matrixL();
        std::mt19937_64 rng(314159);
        std::normal_distribution<double> gauss(0.0, 1.0);
        double acc = 0.0;
        const int samples = 400000;
        for (int s = 0; s < samples; ++s) {
            const Eigen::Vector2d z(gauss(rng), gauss(rng));
            const Eigen::Vector2d f = chol * z;
            acc += oracles::gaussian_pdf(d[0], (contrib * f)(0), var[0]);
        }
        CHECK(std::log(acc / samples) == doctest::Approx(exact).epsilon(0.05));
    }
}

TEST_CASE("posterior mean is affine in the data") {
    const GaussianField field = small_field(6, 1.1, 0.45, 15);
    Eigen::MatrixXd contrib = Eigen::MatrixXd::Random(3, 6).cwiseAbs();
    const Eigen::VectorXd var = Eigen::VectorXd::Constant(3, 0.2);

    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd d1(3), d2(3);
    for (int j = 0; j < 3; ++j) {
        d1[j] = gauss(rng);
        d2[j] = gauss(rng);
    }

    for (const auto& [a, b] : {std::pair{0.7, 0.9}, {-1.2, 2.0}, {0.0, 1.0}}) {
        const Eigen::VectorXd mixed =
            a * d1 + b * d2 - (a + b - 1.0) * (contrib * field.mean);
        const auto post_mixed =
            fuse(field, contrib, make_meas(mixed, var), ModelTag::Single, {1.1, 0.45});
        const auto post1 = fuse(field, contrib, make_meas(d1, var), ModelTag::Single, {1.1, 0.45});
        const auto post2 = fuse(field, contrib, make_meas(d2, var), ModelTag::Single, {1.1, 0.45});
        const Eigen::VectorXd expected =
            a * post1.field.mean + b * post2.field.mean + (1.0 - a - b) * field.mean;
        CHECK((post_mixed.field.mean - expected).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("data never increases posterior uncertainty") {
    const GaussianField field = small_field(6, 1.0, 0.5, 16);
    Eigen::MatrixXd contrib = Eigen::MatrixXd::Random(3, 6).cwiseAbs();
    Eigen::VectorXd d(3);
    d << 1.0, 0.4, -0.3;
    const Eigen::VectorXd var = Eigen::VectorXd::Constant(3, 0.1);
    const auto post = fuse(field, contrib, make_meas(d, var), ModelTag::Single, {1.0, 0.5});

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(field.cov - post.field.cov);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
    CHECK(post.field.cov.diagonal().minCoeff() >= -1e-12);
    CHECK((post.field.cov - post.field.cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("posterior results are bit-reproducible") {
    const GaussianField field = small_field(5, 1.0, 0.5, 17);
    Eigen::MatrixXd contrib = Eigen::MatrixXd::Random(2, 5).cwiseAbs();
    Eigen::VectorXd d(2);
    d << 0.9, 1.7;
    const Eigen::VectorXd var = Eigen::VectorXd::Constant(2, 0.05);
    const auto a = fuse(field, contrib, make_meas(d, var), ModelTag::Single, {1.0, 0.5});
    const auto b = fuse(field, contrib, make_meas(d, var), ModelTag::Single, {1.0, 0.5});
    CHECK(a.field.mean == b.field.mean);
    CHECK(a.field.cov == b.field.cov);
    CHECK(a.log_evidence == b.log_evidence);
}

TEST_CASE("single and integrated fusions coincide without points and masking") {
    const Grid grid(GridSpec{4, 4, 0.0, 1.0, 0.0, 1.0});
    const KernelSpec spec = spatial_se_kernel({1.0, 0.4});
    Eigen::MatrixXd contrib = Eigen::MatrixXd::Random(3, grid.node_count()).cwiseAbs();
    Eigen::VectorXd d(3);
    d << 1.0, 2.0, 1.5;
    const Eigen::VectorXd var = Eigen::VectorXd::Constant(3, 0.04);
    const auto meas = make_meas(d, var);

    const auto single = fuse(gp_prior(spec, grid.nodes()), contrib, meas, ModelTag::Single,
                             spec.hyper);
    const auto integrated = fuse(gp_condition(spec, grid, PointMeasurements{}), contrib, meas,
                                 ModelTag::Integrated, spec.hyper);
    CHECK((single.field.mean - integrated.field.mean).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((single.field.cov - integrated.field.cov).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("evidence search basics") {
    const GaussianField unused = small_field(3, 1.0, 0.5, 18);
    const std::vector<Point> coords = {{0.0, 0.0}, {0.5, 0.1}, {0.9, 0.7}};
    Eigen::MatrixXd contrib(2, 3);
    contrib << 1.0, 0.5, 0.0, 0.2, 0.9, 1.1;
    Eigen::VectorXd d(2);
    d << 1.2, 0.7;
    const Eigen::VectorXd var = Eigen::VectorXd::Constant(2, 0.1);
    const auto meas = make_meas(d, var);

    const auto build = [&](const Hyperparams& hyper) {
        return gp_prior(spatial_se_kernel(hyper), coords);
    };

    SUBCASE("a single candidate is returned as the optimum") {
        const auto result = optimize_hyperparams({{1.5}, {0.3}}, build, contrib, meas);
        CHECK(result.best.sigma == 1.5);
        CHECK(result.best.length == 0.3);
        REQUIRE(result.surface.size() == 1);
    }
    SUBCASE("the surface enumerates the full candidate grid") {
        const auto result =
            optimize_hyperparams({{0.5, 1.0, 2.0}, {0.1, 0.3}}, build, contrib, meas);
        CHECK(result.surface.size() == 6);
        CHECK(result.best_log_ev >= result.surface.front().log_ev);
    }
    SUBCASE("empty candidate lists are rejected") {
        CHECK_THROWS_AS(optimize_hyperparams({{}, {0.1}}, build, contrib, meas), ConfigError);
    }
}

TEST_CASE("evidence optimum beats a deliberately mis-scaled candidate") {
    const ScenarioConfig config = default_scenario();
    const SyntheticData data = generate_synthetic_data(config, config.seed);

    const auto recon = reconstruct(config, data, ModelTag::Integrated, KernelKind::FluxSE);
    const Hyperparams mis_scaled{recon.post.hyper.sigma, recon.post.hyper.length * 100.0};
    const auto degraded =
        reconstruct_fixed(config, data, ModelTag::Integrated, KernelKind::FluxSE, mis_scaled);
    CHECK(recon.metrics.rrmse <= degraded.metrics.rrmse);
}

TEST_CASE("default search spaces span the documented ranges") {
    const auto flux = default_search_space(KernelKind::FluxSE, 2.0);
    REQUIRE(flux.sigmas.size() == 7);
    REQUIRE(flux.lengths.size() == 9);
    CHECK(flux.sigmas.front() == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(flux.sigmas.back() == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(flux.lengths.front() == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(flux.lengths.back() == doctest::Approx(2.0).epsilon(1e-12));

    const auto spatial = default_search_space(KernelKind::SpatialSE, 1.0);
    CHECK(spatial.lengths.front() == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(spatial.lengths.back() == doctest::Approx(2.0).epsilon(1e-12));
}
