#include "verif/multivariate.hpp"

#include <cmath>
#include <stdexcept>

namespace verif::mv {

Eigen::LLT<Eigen::MatrixXd> GaussianVectorForecast::llt() const {
    if (sigma.rows() != sigma.cols() || sigma.rows() != mu.size())
        throw std::invalid_argument("GaussianVectorForecast: dimension mismatch");
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("GaussianVectorForecast: covariance not positive definite");
    return llt;
}

namespace {

PairWeights normalized(Eigen::MatrixXd w) {
    double total = w.sum();
    if (total <= 0.0) throw std::invalid_argument("PairWeights: weights sum to zero");
    w /= total;
    return PairWeights{std::move(w)};
}

} // namespace

PairWeights PairWeights::uniform(int d) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Ones(d, d);
    w.diagonal().setZero();
    return normalized(std::move(w));
}

PairWeights PairWeights::inverse_distance(const GridDomain& grid) {
    int d = grid.size();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        auto [ri, ci] = grid.site(i);
        for (int j = i + 1; j < d; ++j) {
            auto [rj, cj] = grid.site(j);
            double dr = ri - rj, dc = ci - cj;
            double dist = std::sqrt(dr * dr + dc * dc);
            w(i, j) = w(j, i) = 1.0 / dist;
        }
    }
    return normalized(std::move(w));
}

PairWeights PairWeights::inverse_aniso_distance(const GridDomain& grid, const Eigen::Matrix2d& a) {
    Eigen::Matrix2d s = 0.5 * (a + a.transpose());
    int d = grid.size();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        auto [ri, ci] = grid.site(i);
        for (int j = i + 1; j < d; ++j) {
            auto [rj, cj] = grid.site(j);
            Eigen::Vector2d u(ri - rj, ci - cj);
            double q = u.dot(s * u);
            if (!(q > 0.0))
                throw std::invalid_argument("PairWeights: anisotropic form not positive definite");
            w(i, j) = w(j, i) = 1.0 / q;
        }
    }
    return normalized(std::move(w));
}

PairWeights PairWeights::custom(Eigen::MatrixXd w) {
    if (w.rows() != w.cols()) throw std::invalid_argument("PairWeights: square matrix required");
    if ((w.array() < 0.0).any()) throw std::invalid_argument("PairWeights: negative weight");
    return PairWeights{std::move(w)};
}

double se_mv(const Eigen::VectorXd& mu_f, const Eigen::VectorXd& y) {
    if (mu_f.size() != y.size()) throw std::invalid_argument("se_mv: length mismatch");
    return (mu_f - y).squaredNorm();
}

double dss_mv(const GaussianVectorForecast& f, const Eigen::VectorXd& y) {
    auto llt = f.llt();
    Eigen::VectorXd diff = f.mu - y;
    double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    double maha = diff.dot(llt.solve(diff));
    return logdet + maha;
}

double energy_score(const EnsembleForecast& f, const Eigen::VectorXd& y, double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("energy_score: alpha outside (0,2)");
    const auto& x = f.members;
    const int m = static_cast<int>(x.rows());
    if (m < 1) throw std::invalid_argument("energy_score: M >= 1 required");
    if (x.cols() != y.size()) throw std::invalid_argument("energy_score: dimension mismatch");
    double t1 = 0.0;
    for (int i = 0; i < m; ++i) t1 += std::pow((x.row(i).transpose() - y).norm(), alpha);
    t1 /= m;
    double t2 = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            t2 += std::pow((x.row(i) - x.row(j)).norm(), alpha);
    t2 /= static_cast<double>(m) * m;  // (1/2M^2) * 2 * sum_{i<j}
    return t1 - t2;
}

double variogram_score(const EnsembleForecast& f, const Eigen::VectorXd& y, double p,
                       const PairWeights& w) {
    if (!(p > 0.0)) throw std::invalid_argument("variogram_score: p > 0 required");
    const auto& x = f.members;
    const int m = static_cast<int>(x.rows());
    const int d = static_cast<int>(x.cols());
    if (d != y.size() || w.w.rows() != d) throw std::invalid_argument("variogram_score: dimension mismatch");
    double score = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            double wij = w.w(i, j) + w.w(j, i);
            if (wij == 0.0) continue;
            double ef = 0.0;
            for (int k = 0; k < m; ++k) ef += abs_pow(x(k, i) - x(k, j), p);
            ef /= m;
            double diff = ef - abs_pow(y(i) - y(j), p);
            score += wij * diff * diff;
        }
    }
    return score;
}

double variogram_score_from_means(const Eigen::MatrixXd& pair_means, const Eigen::VectorXd& y,
                                  double p, const PairWeights& w) {
    const int d = static_cast<int>(y.size());
    if (pair_means.rows() != d || w.w.rows() != d)
        throw std::invalid_argument("variogram_score_from_means: dimension mismatch");
    double score = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            double wij = w.w(i, j) + w.w(j, i);
            if (wij == 0.0) continue;
            double diff = pair_means(i, j) - abs_pow(y(i) - y(j), p);
            score += wij * diff * diff;
        }
    }
    return score;
}

double logs_mv(const GaussianVectorForecast& f, const Eigen::VectorXd& y) {
    const double d = static_cast<double>(f.dim());
    return 0.5 * (d * std::log(2.0 * M_PI) + dss_mv(f, y));
}

double hyvarinen_mv(const GaussianVectorForecast& f, const Eigen::VectorXd& y) {
    auto llt = f.llt();
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(f.dim(), f.dim()));
    Eigen::VectorXd grad = inv * (y - f.mu);   // -∇ log f
    return -2.0 * inv.trace() + grad.squaredNorm();
}

} // namespace verif::mv
