#include "verif/grf.hpp"

#include <cmath>
#include <stdexcept>

namespace verif::grf {

Eigen::Matrix2d Anisotropy::matrix() const {
    Eigen::Matrix2d A;
    A << std::cos(theta), -std::sin(theta),
         ratio * std::sin(theta), ratio * std::cos(theta);
    return A;
}

Eigen::Matrix2d Anisotropy::symmetrized() const {
    Eigen::Matrix2d A = matrix();
    return 0.5 * (A + A.transpose());
}

Eigen::Matrix2d Anisotropy::form() const {
    // R(theta)^T diag(1, ratio) R(theta): the geometric rotation of the
    // axis-aligned form. Positive definite for every theta and ratio > 0,
    // unlike the symmetrized A, which loses definiteness near theta = pi/2.
    Eigen::Matrix2d R;
    R << std::cos(theta), -std::sin(theta),
         std::sin(theta), std::cos(theta);
    return R.transpose() * Eigen::Vector2d(1.0, ratio).asDiagonal() * R;
}

void PowerExpCovariance::validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("covariance: sigma > 0 required");
    if (!(lambda > 0.0)) throw std::invalid_argument("covariance: lambda > 0 required");
    if (!(beta > 0.0) || beta > 2.0)
        throw std::invalid_argument("covariance: beta in (0,2] required");
    if (anisotropy && !(anisotropy->ratio > 0.0))
        throw std::invalid_argument("covariance: anisotropy ratio > 0 required");
}

double PowerExpCovariance::operator()(const Eigen::Vector2d& u) const {
    double s2 = sigma * sigma;
    if (anisotropy) {
        double q = u.dot(anisotropy->form() * u);
        return s2 * std::exp(-q / lambda);
    }
    double h = u.norm();
    if (h == 0.0) return s2;
    return s2 * std::exp(-std::pow(h / lambda, beta));
}

Eigen::MatrixXd covariance_matrix(const PowerExpCovariance& cov, const GridDomain& grid) {
    cov.validate();
    const int d = grid.size();
    Eigen::MatrixXd C(d, d);
    for (int i = 0; i < d; ++i) {
        auto [ri, ci] = grid.site(i);
        C(i, i) = cov.sigma * cov.sigma;
        for (int j = i + 1; j < d; ++j) {
            auto [rj, cj] = grid.site(j);
            Eigen::Vector2d u(static_cast<double>(ri - rj), static_cast<double>(ci - cj));
            double v = cov(u);
            C(i, j) = v;
            C(j, i) = v;
        }
    }
    return C;
}

Eigen::MatrixXd robust_cholesky(const Eigen::MatrixXd& cov, double sigma2) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    for (double jitter = 1e-10 * sigma2; jitter <= 1e-6 * sigma2; jitter *= 10.0) {
        Eigen::MatrixXd jittered = cov;
        jittered.diagonal().array() += jitter;
        llt.compute(jittered);
        if (llt.info() == Eigen::Success) return llt.matrixL();
    }
    throw std::runtime_error("robust_cholesky: covariance not positive definite");
}

FieldSampler::FieldSampler(const PowerExpCovariance& cov, const GridDomain& grid)
    : cov_(covariance_matrix(cov, grid)),
      chol_(robust_cholesky(cov_, cov.sigma * cov.sigma)) {}

Eigen::VectorXd FieldSampler::sample(StreamRng& rng) const {
    Eigen::VectorXd z(dim());
    for (int i = 0; i < dim(); ++i) z(i) = rng.normal();
    return chol_ * z;
}

void FieldForecastSpec::validate() const {
    cov.validate();
    switch (kind) {
        case ForecastKind::Gaussian:
            break;
        case ForecastKind::StudentLocationScale:
            if (!(student_df > 2.0))
                throw std::invalid_argument("forecast: student df > 2 required");
            if (!(student_target_sd > 0.0))
                throw std::invalid_argument("forecast: student target sd > 0 required");
            break;
        case ForecastKind::AdditiveNoised:
        case ForecastKind::MultiplicativeNoised:
            if (noise_range < 0.0)
                throw std::invalid_argument("forecast: noise range >= 0 required");
            break;
    }
}

double FieldForecastSpec::student_tau() const {
    return student_target_sd * std::sqrt((student_df - 2.0) / student_df);
}

ForecastModel::ForecastModel(FieldForecastSpec spec, const GridDomain& grid)
    : spec_(std::move(spec)), field_(spec_.cov, grid) {
    spec_.validate();
}

ForecastInstance ForecastModel::instance(StreamRng& rng) const {
    const int d = field_.dim();
    ForecastInstance inst;
    inst.mean = Eigen::VectorXd::Constant(d, spec_.mean_offset);
    inst.scale = Eigen::VectorXd::Ones(d);
    switch (spec_.kind) {
        case ForecastKind::Gaussian:
            inst.analytic_gaussian = true;
            break;
        case ForecastKind::StudentLocationScale:
            inst.scale.setConstant(spec_.student_tau() / spec_.cov.sigma);
            break;
        case ForecastKind::AdditiveNoised:
            for (int i = 0; i < d; ++i)
                inst.mean(i) += rng.uniform(-spec_.noise_range, spec_.noise_range);
            inst.analytic_gaussian = true;
            break;
        case ForecastKind::MultiplicativeNoised:
            for (int i = 0; i < d; ++i)
                inst.scale(i) = 1.0 + rng.uniform(-spec_.noise_range, spec_.noise_range);
            inst.analytic_gaussian = true;
            break;
    }
    return inst;
}

Eigen::MatrixXd ForecastModel::sample_members(const ForecastInstance& inst, int members,
                                              StreamRng& rng) const {
    if (members < 1) throw std::invalid_argument("sample_members: M >= 1 required");
    const int d = field_.dim();
    const bool student = spec_.kind == ForecastKind::StudentLocationScale;
    // One column of latent normals per member, then a single triangular
    // product; much faster than per-member matrix-vector products.
    Eigen::MatrixXd z(d, members);
    Eigen::VectorXd mix = Eigen::VectorXd::Ones(members);
    for (int m = 0; m < members; ++m) {
        for (int i = 0; i < d; ++i) z(i, m) = rng.normal();
        if (student) mix(m) = std::sqrt(spec_.student_df / rng.chi_squared(spec_.student_df));
    }
    Eigen::MatrixXd fields = field_.chol() * z;  // d x M
    Eigen::MatrixXd out(members, d);
    for (int m = 0; m < members; ++m)
        out.row(m) =
            (inst.mean.array() + mix(m) * inst.scale.array() * fields.col(m).array())
                .transpose();
    return out;
}

mv::GaussianVectorForecast ForecastModel::analytic(const ForecastInstance& inst) const {
    if (!inst.analytic_gaussian)
        throw std::invalid_argument("analytic: forecast instance is not Gaussian");
    mv::GaussianVectorForecast f;
    f.mu = inst.mean;
    f.sigma = inst.scale.asDiagonal() * field_.covariance() * inst.scale.asDiagonal();
    return f;
}

} // namespace verif::grf
