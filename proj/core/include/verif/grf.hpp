// Gaussian random fields on a grid and the simulation-study forecast catalog.
#pragma once

#include "verif/grid.hpp"
#include "verif/multivariate.hpp"
#include "verif/rng.hpp"

#include <Eigen/Dense>
#include <optional>

namespace verif::grf {

struct Anisotropy {
    double theta = 0.0;  // rotation angle in [-pi/2, pi/2]
    double ratio = 1.0;  // axis ratio, > 0

    // A = [[cos t, -sin t], [r sin t, r cos t]] and its symmetrization.
    Eigen::Matrix2d matrix() const;
    Eigen::Matrix2d symmetrized() const;
    // Quadratic form used in the covariance exponent:
    // R(theta)^T diag(1, ratio) R(theta), positive definite for every angle.
    Eigen::Matrix2d form() const;
};

struct PowerExpCovariance {
    double sigma = 1.0;   // marginal standard deviation
    double lambda = 3.0;  // correlation range
    double beta = 1.0;    // smoothness exponent in (0, 2]
    std::optional<Anisotropy> anisotropy;

    void validate() const;
    // Isotropic: sigma^2 exp(-(||u||/lambda)^beta).
    // Anisotropic: sigma^2 exp(-(u^T A_form u)/lambda), exponent linear in
    // the quadratic form and beta unused.
    double operator()(const Eigen::Vector2d& u) const;
};

Eigen::MatrixXd covariance_matrix(const PowerExpCovariance& cov, const GridDomain& grid);

// Cholesky factor with escalating diagonal jitter (1e-10*sigma^2 up to
// 1e-6*sigma^2) when the matrix is numerically semidefinite.
Eigen::MatrixXd robust_cholesky(const Eigen::MatrixXd& cov, double sigma2);

// Zero-mean Gaussian field sampler with a cached Cholesky factor.
class FieldSampler {
public:
    FieldSampler(const PowerExpCovariance& cov, const GridDomain& grid);

    Eigen::VectorXd sample(StreamRng& rng) const;
    const Eigen::MatrixXd& covariance() const { return cov_; }
    const Eigen::MatrixXd& chol() const { return chol_; }
    int dim() const { return static_cast<int>(cov_.rows()); }

private:
    Eigen::MatrixXd cov_;
    Eigen::MatrixXd chol_;
};

enum class ForecastKind {
    Gaussian,              // mean offset + power-exponential covariance
    StudentLocationScale,  // multivariate-t via a Gaussian scale mixture
    AdditiveNoised,        // ideal field + per-site uniform mean shift
    MultiplicativeNoised,  // ideal field with per-site uniform sd factor
};

struct FieldForecastSpec {
    ForecastKind kind = ForecastKind::Gaussian;
    double mean_offset = 0.0;  // c
    PowerExpCovariance cov;
    double student_df = 5.0;
    double student_target_sd = 0.745;
    double noise_range = 0.0;  // r for the noised kinds

    void validate() const;
    // tau = target_sd * sqrt((df-2)/df)
    double student_tau() const;
};

// A forecast issued for one observation instance. Noised kinds freeze one
// noise field here, shared by every ensemble member.
struct ForecastInstance {
    Eigen::VectorXd mean;   // per-site location
    Eigen::VectorXd scale;  // per-site multiplier on the latent field
    bool analytic_gaussian = false;
};

class ForecastModel {
public:
    ForecastModel(FieldForecastSpec spec, const GridDomain& grid);

    ForecastInstance instance(StreamRng& rng) const;
    Eigen::MatrixXd sample_members(const ForecastInstance& inst, int members,
                                   StreamRng& rng) const;
    // Exact multivariate form; only valid when inst.analytic_gaussian.
    mv::GaussianVectorForecast analytic(const ForecastInstance& inst) const;

    const FieldForecastSpec& spec() const { return spec_; }
    const FieldSampler& field() const { return field_; }

private:
    FieldForecastSpec spec_;
    FieldSampler field_;
};

} // namespace verif::grf
