#pragma once

#include "verif/grid.hpp"

#include <Eigen/Dense>

namespace verif::mv {

// Gaussian forecast on R^d with cached Cholesky factor.
struct GaussianVectorForecast {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;  // symmetric positive definite

    Eigen::LLT<Eigen::MatrixXd> llt() const;
    int dim() const { return static_cast<int>(mu.size()); }
};

// Nonnegative symmetric pair weights for the variogram score. Built-in
// schemes are normalized to sum to 1 so scores are comparable across schemes;
// diagonal entries are zero.
struct PairWeights {
    Eigen::MatrixXd w;  // d x d

    static PairWeights uniform(int d);
    static PairWeights inverse_distance(const GridDomain& grid);
    // Weights 1 / ||s - s'||_A with the symmetrized quadratic form of A.
    static PairWeights inverse_aniso_distance(const GridDomain& grid, const Eigen::Matrix2d& a);
    static PairWeights custom(Eigen::MatrixXd w);
};

double se_mv(const Eigen::VectorXd& mu_f, const Eigen::VectorXd& y);
double dss_mv(const GaussianVectorForecast& f, const Eigen::VectorXd& y);
double energy_score(const EnsembleForecast& f, const Eigen::VectorXd& y, double alpha = 1.0);
double variogram_score(const EnsembleForecast& f, const Eigen::VectorXd& y, double p,
                       const PairWeights& w);
// Variogram score with the ensemble expectation replaced by precomputed pair
// means (used by the closed-form Gaussian path).
double variogram_score_from_means(const Eigen::MatrixXd& pair_means, const Eigen::VectorXd& y,
                                  double p, const PairWeights& w);
double logs_mv(const GaussianVectorForecast& f, const Eigen::VectorXd& y);
double hyvarinen_mv(const GaussianVectorForecast& f, const Eigen::VectorXd& y);

// |x|^p specialized for the common orders to avoid std::pow in hot loops.
inline double abs_pow(double x, double p) {
    double a = std::abs(x);
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    if (p == 0.5) return std::sqrt(a);
    return std::pow(a, p);
}

} // namespace verif::mv
