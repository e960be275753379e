// Closed-form expected scores and exact score paths for Gaussian forecasts,
// used as ground truth against Monte-Carlo estimates.
#pragma once

#include "verif/grf.hpp"
#include "verif/grid.hpp"
#include "verif/multivariate.hpp"
#include "verif/univariate.hpp"

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace verif::oracle {

struct GaussianPair {
    uni::GaussianMarginal forecast;
    uni::GaussianMarginal truth;
};

// Expected score of the Gaussian forecast under the Gaussian truth.
// Supported ids: se, ae, qs (alpha), bs (threshold), crps, dss, ess, logs,
// hyvarinen, quads, pseudos (alpha).
double expected_univariate(const std::string& score, const GaussianPair& pair,
                           const std::map<std::string, double>& params = {});

// Supported ids: se, dss, logs, vs (order p, optional weights; requires equal
// pair means).
double expected_multivariate(const std::string& score,
                             const mv::GaussianVectorForecast& forecast,
                             const mv::GaussianVectorForecast& truth,
                             const std::map<std::string, double>& params = {},
                             const mv::PairWeights* weights = nullptr);

// E|X|^nu for X ~ N(0, sigma^2). A nonzero mean is rejected: it would need
// the confluent hypergeometric function, which no supported use case hits.
double gaussian_abs_moment(double nu, double sigma, double mean = 0.0);

// Exact variogram score of a zero-pair-mean Gaussian forecast: the VS sees F
// only through E|X_i - X_j|^p, which is a closed absolute moment.
double closed_vs_from_cov(const Eigen::MatrixXd& cov, double p,
                          const mv::PairWeights& weights, const Eigen::VectorXd& y);
double closed_vs(const grf::PowerExpCovariance& cov, const GridDomain& grid, double p,
                 const mv::PairWeights& weights, const Eigen::VectorXd& y);

// Variance of the p-variation increment of a stationary isotropic field.
double pvs_increment_variance(const grf::PowerExpCovariance& cov);

// Exact p-variation score of a zero-mean stationary Gaussian forecast.
double closed_pvs(const grf::PowerExpCovariance& cov, const GridDomain& grid, double p,
                  const Eigen::VectorXd& y,
                  const std::vector<double>& cell_weights = {});

// Exact CRPS of spatial mean for a Gaussian forecast N(mu, cov): each patch
// mean is Gaussian with variance (1/|P|^2) sum of in-patch covariances.
double crps_spatial_mean_closed(const Eigen::VectorXd& mu, const Eigen::MatrixXd& cov,
                                const GridDomain& grid, int patch_size,
                                const Eigen::VectorXd& y);
double crps_spatial_mean_closed(const grf::PowerExpCovariance& cov, const GridDomain& grid,
                                int patch_size, const Eigen::VectorXd& y,
                                double mean_offset = 0.0);

} // namespace verif::oracle
