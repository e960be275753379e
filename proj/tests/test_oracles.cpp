#include "verif/compose.hpp"
#include "verif/oracles.hpp"
#include "verif/quadrature.hpp"
#include "verif/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace verif;
using oracle::GaussianPair;

TEST_CASE("expected univariate scores, worked values") {
    GaussianPair same{{0.0, 1.0}, {0.0, 1.0}};
    CHECK(oracle::expected_univariate("se", same) == doctest::Approx(1.0).epsilon(1e-13));
    // G(t) = 1/2 at t = mu gives E[BS] = 1/4
    CHECK(oracle::expected_univariate("bs", same, {{"threshold", 0.0}}) ==
          doctest::Approx(0.25).epsilon(1e-13));
    // CRPS entropy of the standard normal: 1/sqrt(pi) - explicit at F = G
    CHECK(oracle::expected_univariate("crps", same) ==
          doctest::Approx(1.0 / std::sqrt(M_PI) * (std::sqrt(2.0) - 1.0) +
                          1.0 / std::sqrt(M_PI) * (2.0 - std::sqrt(2.0)))
              .epsilon(1e-12));
    CHECK(oracle::expected_univariate("dss", same) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(oracle::expected_univariate("logs", same) ==
          doctest::Approx(0.5 * std::log(2.0 * M_PI) + 0.5).epsilon(1e-13));
}

TEST_CASE("expected univariate scores agree with quadrature") {
    GaussianPair pair{{0.3, 1.2}, {-0.1, 0.9}};
    auto mc = [&](const std::string& score, std::map<std::string, double> params = {}) {
        // integrate the pointwise score against the truth density
        return integrate(
            [&](double y) {
                double v = 0.0;
                if (score == "se")
                    v = uni::se(pair.forecast.mu, y);
                else if (score == "ae")
                    v = std::abs(pair.forecast.mu - y);  // median = mean here
                else if (score == "qs")
                    v = uni::qs(params.at("alpha"),
                                pair.forecast.mu + pair.forecast.sigma *
                                                       norm_quantile(params.at("alpha")),
                                y);
                else if (score == "bs")
                    v = uni::bs(params.at("threshold"),
                                norm_cdf((params.at("threshold") - pair.forecast.mu) /
                                               pair.forecast.sigma),
                                y);
                else if (score == "crps")
                    v = uni::crps_gaussian({pair.forecast.mu, pair.forecast.sigma}, y);
                else if (score == "dss")
                    v = uni::dss(pair.forecast, y);
                return v * norm_pdf((y - pair.truth.mu) / pair.truth.sigma) /
                       pair.truth.sigma;
            },
            pair.truth.mu - 12.0 * pair.truth.sigma, pair.truth.mu + 12.0 * pair.truth.sigma,
            1e-12);
    };
    CHECK(oracle::expected_univariate("se", pair) == doctest::Approx(mc("se")).epsilon(1e-10));
    CHECK(oracle::expected_univariate("ae", pair) == doctest::Approx(mc("ae")).epsilon(1e-10));
    CHECK(oracle::expected_univariate("qs", pair, {{"alpha", 0.75}}) ==
          doctest::Approx(mc("qs", {{"alpha", 0.75}})).epsilon(1e-10));
    CHECK(oracle::expected_univariate("bs", pair, {{"threshold", 0.4}}) ==
          doctest::Approx(mc("bs", {{"threshold", 0.4}})).epsilon(1e-10));
    CHECK(oracle::expected_univariate("crps", pair) ==
          doctest::Approx(mc("crps")).epsilon(1e-10));
    CHECK(oracle::expected_univariate("dss", pair) == doctest::Approx(mc("dss")).epsilon(1e-10));
}

TEST_CASE("expected multivariate scores") {
    mv::GaussianVectorForecast f;
    f.mu = Eigen::VectorXd::Zero(2);
    f.sigma = Eigen::MatrixXd::Identity(2, 2);
    mv::GaussianVectorForecast g = f;
    CHECK(oracle::expected_multivariate("se", f, g) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(oracle::expected_multivariate("dss", f, g) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(oracle::expected_multivariate("logs", f, g) ==
          doctest::Approx(std::log(2.0 * M_PI) + 1.0).epsilon(1e-13));

    // shifted forecast mean adds the squared bias to the expected SE
    mv::GaussianVectorForecast h = f;
    h.mu = Eigen::Vector2d(1.0, -1.0);
    CHECK(oracle::expected_multivariate("se", h, g) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("gaussian absolute moments") {
    CHECK(oracle::gaussian_abs_moment(1.0, 1.0) ==
          doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-13));
    CHECK(oracle::gaussian_abs_moment(2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(oracle::gaussian_abs_moment(0.5, 1.0) ==
          doctest::Approx(std::pow(2.0, 0.25) * std::tgamma(0.75) / std::sqrt(M_PI))
              .epsilon(1e-13));
    // even integer moments: (2k-1)!! sigma^{2k}
    CHECK(oracle::gaussian_abs_moment(4.0, 1.5) ==
          doctest::Approx(3.0 * std::pow(1.5, 4.0)).epsilon(1e-13));
    CHECK(oracle::gaussian_abs_moment(6.0, 1.0) == doctest::Approx(15.0).epsilon(1e-12));
    // scale equivariance: E|sX|^nu = s^nu E|X|^nu
    CHECK(oracle::gaussian_abs_moment(0.5, 2.0) ==
          doctest::Approx(std::sqrt(2.0) * oracle::gaussian_abs_moment(0.5, 1.0))
              .epsilon(1e-13));
    CHECK_THROWS(oracle::gaussian_abs_moment(1.0, 1.0, 0.3));

    // quadrature cross-check at a fractional order
    double q = 2.0 * integrate(
                         [](double x) { return std::pow(x, 0.7) * norm_pdf(x); }, 0.0,
                         14.0, 1e-12);
    CHECK(oracle::gaussian_abs_moment(0.7, 1.0) == doctest::Approx(q).epsilon(1e-10));
}

TEST_CASE("closed variogram score") {
    // pair at distance 3 under sigma=1, lambda=3: var of the difference is
    // 2(1 - e^{-1}), so E|X_i - X_j| = sqrt(2 var / pi)
    GridDomain grid(4, 1);
    grf::PowerExpCovariance cov{1.0, 3.0, 1.0, std::nullopt};
    Eigen::MatrixXd c = grf::covariance_matrix(cov, grid);
    double var = c(0, 0) + c(3, 3) - 2.0 * c(0, 3);
    CHECK(var == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))).epsilon(1e-13));
    double expected_abs = std::sqrt(2.0 * var / M_PI);
    CHECK(expected_abs == doctest::Approx(0.8971288).epsilon(1e-6));

    // single active pair via custom weights: score is (E|X0-X3| - |y0-y3|)^2
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(4, 4);
    w(0, 3) = w(3, 0) = 1.0;
    auto weights = mv::PairWeights::custom(w);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(4);
    y(3) = 1.0;
    // the score sums over ordered pairs, so both (0,3) and (3,0) contribute
    double got = oracle::closed_vs_from_cov(c, 1.0, weights, y);
    CHECK(got ==
          doctest::Approx(2.0 * (expected_abs - 1.0) * (expected_abs - 1.0)).epsilon(1e-10));

    // Monte-Carlo agreement with the ensemble estimator, uniform weights
    GridDomain g2(3, 3);
    auto uw = mv::PairWeights::uniform(9);
    Eigen::VectorXd y2 = Eigen::VectorXd::LinSpaced(9, -1.0, 1.0);
    double closed = oracle::closed_vs(cov, g2, 0.5, uw, y2);
    grf::FieldSampler sampler(cov, g2);
    StreamRng rng(23, 0);
    const int m = 40000;
    Eigen::MatrixXd members(m, 9);
    for (int k = 0; k < m; ++k) members.row(k) = sampler.sample(rng).transpose();
    double ens = mv::variogram_score(EnsembleForecast{members}, y2, 0.5, uw);
    CHECK(ens == doctest::Approx(closed).epsilon(0.01));

    // expected_multivariate rejects unequal pair means for vs
    mv::GaussianVectorForecast f;
    f.mu = Eigen::Vector2d(0.0, 1.0);
    f.sigma = Eigen::Matrix2d::Identity();
    mv::GaussianVectorForecast gt;
    gt.mu = Eigen::Vector2d::Zero();
    gt.sigma = Eigen::Matrix2d::Identity();
    CHECK_THROWS(oracle::expected_multivariate("vs", f, gt, {{"p", 1.0}}));
}

TEST_CASE("p-variation increment variance and closed score") {
    grf::PowerExpCovariance cov{1.0, 3.0, 1.0, std::nullopt};
    // Z = X_{r+1,c} + X_{r,c+1} - X_{r,c} - X_{r+1,c+1}
    double var_z = oracle::pvs_increment_variance(cov);
    CHECK(var_z ==
          doctest::Approx(4.0 * (1.0 + std::exp(-std::sqrt(2.0) / 3.0) -
                                 2.0 * std::exp(-1.0 / 3.0)))
              .epsilon(1e-13));

    // closed pVS equals the ensemble estimator in the large-M limit
    GridDomain grid(4, 4);
    Eigen::VectorXd y(16);
    StreamRng yrng(29, 1);
    grf::FieldSampler sampler(cov, grid);
    y = sampler.sample(yrng);
    double closed = oracle::closed_pvs(cov, grid, 1.0, y);
    const int m = 40000;
    Eigen::MatrixXd members(m, 16);
    StreamRng rng(29, 2);
    for (int k = 0; k < m; ++k) members.row(k) = sampler.sample(rng).transpose();
    double ens = compose::p_variation_score(members, y, grid, 1.0);
    CHECK(ens == doctest::Approx(closed).epsilon(0.01));
}

TEST_CASE("closed CRPS of spatial mean") {
    grf::PowerExpCovariance cov{1.0, 3.0, 1.0, std::nullopt};
    GridDomain grid(3, 3);
    Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(9, -1.0, 1.0);

    // patch size 1: every site is its own patch, so this is the mean
    // per-site Gaussian CRPS
    double s1 = oracle::crps_spatial_mean_closed(cov, grid, 1, y);
    double direct = 0.0;
    for (int i = 0; i < 9; ++i) direct += uni::crps_gaussian({0.0, 1.0}, y(i));
    CHECK(s1 == doctest::Approx(direct / 9.0).epsilon(1e-12));

    // tiny correlation range: patch-mean variance approaches sigma^2/|P|
    grf::PowerExpCovariance rough{1.0, 1e-8, 1.0, std::nullopt};
    double s2 = oracle::crps_spatial_mean_closed(rough, grid, 3, y);
    double patch_mean_y = y.mean();
    CHECK(s2 == doctest::Approx(uni::crps_gaussian({0.0, 1.0 / 3.0}, patch_mean_y))
                    .epsilon(1e-6));

    // mean offset shifts every patch mean by the same constant
    double s3 = oracle::crps_spatial_mean_closed(cov, grid, 3, y, 0.7);
    Eigen::MatrixXd c = grf::covariance_matrix(cov, grid);
    double var_p = c.sum() / 81.0;
    CHECK(s3 ==
          doctest::Approx(uni::crps_gaussian({0.7, std::sqrt(var_p)}, patch_mean_y))
              .epsilon(1e-12));
}

TEST_CASE("ideal forecast minimizes the expected score") {
    StreamRng rng(31, 0);
    const char* scores[] = {"se", "crps", "dss", "logs"};
    for (int k = 0; k < 50; ++k) {
        GaussianPair ideal;
        ideal.truth = {rng.uniform(-2.0, 2.0), rng.uniform(0.5, 2.0)};
        ideal.forecast = ideal.truth;
        GaussianPair off = ideal;
        off.forecast = {ideal.truth.mu + rng.uniform(-1.0, 1.0),
                        ideal.truth.sigma * rng.uniform(0.5, 2.0)};
        for (const char* s : scores) {
            double gap = oracle::expected_univariate(s, off) -
                         oracle::expected_univariate(s, ideal);
            CHECK(gap >= -1e-12);
        }
    }
}
