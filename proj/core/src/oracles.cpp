#include "verif/oracles.hpp"

#include "verif/compose.hpp"
#include "verif/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace verif::oracle {

namespace {

double get_param(const std::map<std::string, double>& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end())
        throw std::invalid_argument("expected score: missing parameter '" + key + "'");
    return it->second;
}

// E_G[(q - Y) 1{Y <= q}] for G = N(mu, sigma^2): truncated-Gaussian partial
// expectation in closed form.
double lower_partial(double q, double mu, double sigma) {
    double z = (q - mu) / sigma;
    return (q - mu) * norm_cdf(z) + sigma * norm_pdf(z);
}

double expected_qs(double alpha, const GaussianPair& p) {
    double q = p.forecast.mu + p.forecast.sigma * norm_quantile(alpha);
    return lower_partial(q, p.truth.mu, p.truth.sigma) - alpha * (q - p.truth.mu);
}

// E_G |m - Y|: folded-normal mean.
double expected_ae(double m, const GaussianPair& p) {
    double z = (m - p.truth.mu) / p.truth.sigma;
    return p.truth.sigma * (z * (2.0 * norm_cdf(z) - 1.0) + 2.0 * norm_pdf(z));
}

double expected_crps(const GaussianPair& p) {
    auto F = [&](double z) { return norm_cdf((z - p.forecast.mu) / p.forecast.sigma); };
    auto G = [&](double z) { return norm_cdf((z - p.truth.mu) / p.truth.sigma); };
    double lo = std::min(p.forecast.mu - 10.0 * p.forecast.sigma,
                         p.truth.mu - 10.0 * p.truth.sigma);
    double hi = std::max(p.forecast.mu + 10.0 * p.forecast.sigma,
                         p.truth.mu + 10.0 * p.truth.sigma);
    double divergence = integrate(
        [&](double z) { double d = F(z) - G(z); return d * d; }, lo, hi);
    // Entropy term: integral of G(1-G) equals sigma_G / sqrt(pi).
    return divergence + p.truth.sigma / std::sqrt(M_PI);
}

double expected_logs(const GaussianPair& p) {
    double sf2 = p.forecast.sigma * p.forecast.sigma;
    double sg2 = p.truth.sigma * p.truth.sigma;
    double dmu = p.truth.mu - p.forecast.mu;
    double kl = std::log(p.forecast.sigma / p.truth.sigma) +
                (sg2 + dmu * dmu) / (2.0 * sf2) - 0.5;
    double entropy = 0.5 * std::log(2.0 * M_PI * M_E * sg2);
    return kl + entropy;
}

double expected_hyvarinen(const GaussianPair& p) {
    DensityForecast f = DensityForecast::gaussian(p.forecast.mu, p.forecast.sigma);
    DensityForecast g = DensityForecast::gaussian(p.truth.mu, p.truth.sigma);
    double lo = p.truth.mu - 10.0 * p.truth.sigma;
    double hi = p.truth.mu + 10.0 * p.truth.sigma;
    return integrate(
        [&](double y) {
            double lf = f.dpdf(y) / f.pdf(y);
            double lg = g.dpdf(y) / g.pdf(y);
            return (lf * lf - 2.0 * lf * lg) * g.pdf(y);
        },
        lo, hi);
}

double expected_quads(const GaussianPair& p) {
    double norm2 = 0.5 / (p.forecast.sigma * std::sqrt(M_PI));
    double v = p.forecast.sigma * p.forecast.sigma + p.truth.sigma * p.truth.sigma;
    double dmu = p.forecast.mu - p.truth.mu;
    double inner = std::exp(-0.5 * dmu * dmu / v) / std::sqrt(2.0 * M_PI * v);
    return norm2 - 2.0 * inner;
}

double expected_pseudos(double alpha, const GaussianPair& p) {
    if (!(alpha > 1.0)) throw std::invalid_argument("expected pseudos: alpha > 1 required");
    DensityForecast f = DensityForecast::gaussian(p.forecast.mu, p.forecast.sigma);
    DensityForecast g = DensityForecast::gaussian(p.truth.mu, p.truth.sigma);
    double lo = std::min(p.forecast.mu - 12.0 * p.forecast.sigma,
                         p.truth.mu - 12.0 * p.truth.sigma);
    double hi = std::max(p.forecast.mu + 12.0 * p.forecast.sigma,
                         p.truth.mu + 12.0 * p.truth.sigma);
    double inner = integrate(
        [&](double y) { return std::pow(f.pdf(y), alpha - 1.0) * g.pdf(y); }, lo, hi);
    return -inner / std::pow(f.norm(alpha), alpha - 1.0);
}

double expected_ess(const GaussianPair& p) {
    double sf2 = p.forecast.sigma * p.forecast.sigma;
    double sg2 = p.truth.sigma * p.truth.sigma;
    double dmu = p.truth.mu - p.forecast.mu;
    // Gaussian truth: skewness 0, kurtosis 3; Gaussian forecast: skewness 0.
    double t1 = (sg2 - sf2) + dmu * dmu;
    double t2 = 2.0 * dmu;
    return t1 * t1 + sg2 * t2 * t2 + sg2 * sg2 * (3.0 - 1.0);
}

} // namespace

double expected_univariate(const std::string& score, const GaussianPair& p,
                           const std::map<std::string, double>& params) {
    if (!(p.forecast.sigma > 0.0) || !(p.truth.sigma > 0.0))
        throw std::invalid_argument("expected_univariate: sigma > 0 required");
    double dmu = p.forecast.mu - p.truth.mu;
    double sg2 = p.truth.sigma * p.truth.sigma;
    if (score == "se") return dmu * dmu + sg2;
    if (score == "ae") return expected_ae(p.forecast.mu, p);
    if (score == "qs") return expected_qs(get_param(params, "alpha"), p);
    if (score == "bs") {
        double t = get_param(params, "threshold");
        double Ft = norm_cdf((t - p.forecast.mu) / p.forecast.sigma);
        double Gt = norm_cdf((t - p.truth.mu) / p.truth.sigma);
        return (Ft - Gt) * (Ft - Gt) + Gt * (1.0 - Gt);
    }
    if (score == "crps") return expected_crps(p);
    if (score == "dss") {
        double sf2 = p.forecast.sigma * p.forecast.sigma;
        return (dmu * dmu + sg2) / sf2 + 2.0 * std::log(p.forecast.sigma);
    }
    if (score == "ess") return expected_ess(p);
    if (score == "logs") return expected_logs(p);
    if (score == "hyvarinen") return expected_hyvarinen(p);
    if (score == "quads") return expected_quads(p);
    if (score == "pseudos") return expected_pseudos(get_param(params, "alpha"), p);
    throw std::invalid_argument("expected_univariate: unsupported score '" + score + "'");
}

double gaussian_abs_moment(double nu, double sigma, double mean) {
    if (!(nu > 0.0)) throw std::invalid_argument("gaussian_abs_moment: nu > 0 required");
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_abs_moment: sigma > 0 required");
    if (mean != 0.0)
        throw std::invalid_argument(
            "gaussian_abs_moment: nonzero mean unsupported (needs 1F1)");
    return std::pow(sigma, nu) * std::exp2(0.5 * nu) * std::tgamma(0.5 * (nu + 1.0)) /
           std::sqrt(M_PI);
}

namespace {

double expected_vs(const mv::GaussianVectorForecast& f, const mv::GaussianVectorForecast& g,
                   double p, const mv::PairWeights* weights) {
    const int d = static_cast<int>(f.mu.size());
    mv::PairWeights w = weights ? *weights : mv::PairWeights::uniform(d);
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            double wij = w.w(i, j);
            if (wij == 0.0) continue;
            if (f.mu(i) != f.mu(j) || g.mu(i) != g.mu(j))
                throw std::invalid_argument(
                    "expected vs: pair mean gap unsupported (needs 1F1)");
            double vf = f.sigma(i, i) + f.sigma(j, j) - 2.0 * f.sigma(i, j);
            double vg = g.sigma(i, i) + g.sigma(j, j) - 2.0 * g.sigma(i, j);
            double mf = vf > 0.0 ? gaussian_abs_moment(p, std::sqrt(vf)) : 0.0;
            double mg = vg > 0.0 ? gaussian_abs_moment(p, std::sqrt(vg)) : 0.0;
            double mg2 = vg > 0.0 ? gaussian_abs_moment(2.0 * p, std::sqrt(vg)) : 0.0;
            total += wij * (mf * mf - 2.0 * mf * mg + mg2);
        }
    }
    return total;
}

} // namespace

double expected_multivariate(const std::string& score,
                             const mv::GaussianVectorForecast& f,
                             const mv::GaussianVectorForecast& g,
                             const std::map<std::string, double>& params,
                             const mv::PairWeights* weights) {
    if (f.mu.size() != g.mu.size())
        throw std::invalid_argument("expected_multivariate: dimension mismatch");
    const int d = static_cast<int>(f.mu.size());
    if (score == "se") return (f.mu - g.mu).squaredNorm() + g.sigma.trace();
    if (score == "dss" || score == "logs") {
        Eigen::LLT<Eigen::MatrixXd> llt(f.sigma);
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument("expected_multivariate: singular forecast covariance");
        double logdet = 0.0;
        for (int i = 0; i < d; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
        Eigen::VectorXd dmu = f.mu - g.mu;
        double maha = dmu.dot(llt.solve(dmu));
        double trace = llt.solve(g.sigma).trace();
        double dss = logdet + maha + trace;
        if (score == "dss") return dss;
        return 0.5 * (d * std::log(2.0 * M_PI) + dss);
    }
    if (score == "vs") {
        auto it = params.find("p");
        double p = it == params.end() ? 0.5 : it->second;
        return expected_vs(f, g, p, weights);
    }
    throw std::invalid_argument("expected_multivariate: unsupported score '" + score + "'");
}

double closed_vs_from_cov(const Eigen::MatrixXd& cov, double p,
                          const mv::PairWeights& weights, const Eigen::VectorXd& y) {
    const int d = static_cast<int>(cov.rows());
    if (y.size() != d) throw std::invalid_argument("closed_vs: dimension mismatch");
    Eigen::MatrixXd pair_means = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            double v = cov(i, i) + cov(j, j) - 2.0 * cov(i, j);
            double m = v > 0.0 ? gaussian_abs_moment(p, std::sqrt(v)) : 0.0;
            pair_means(i, j) = m;
            pair_means(j, i) = m;
        }
    }
    return mv::variogram_score_from_means(pair_means, y, p, weights);
}

double closed_vs(const grf::PowerExpCovariance& cov, const GridDomain& grid, double p,
                 const mv::PairWeights& weights, const Eigen::VectorXd& y) {
    return closed_vs_from_cov(grf::covariance_matrix(cov, grid), p, weights, y);
}

double pvs_increment_variance(const grf::PowerExpCovariance& cov) {
    if (cov.anisotropy)
        throw std::invalid_argument("pvs_increment_variance: isotropic covariance required");
    double s2 = cov.sigma * cov.sigma;
    double c_diag = std::exp(-std::pow(std::sqrt(2.0) / cov.lambda, cov.beta));
    double c_adj = std::exp(-std::pow(1.0 / cov.lambda, cov.beta));
    return 4.0 * s2 * (1.0 + c_diag - 2.0 * c_adj);
}

double closed_pvs(const grf::PowerExpCovariance& cov, const GridDomain& grid, double p,
                  const Eigen::VectorXd& y, const std::vector<double>& cell_weights) {
    double sz2 = pvs_increment_variance(cov);
    double expected = sz2 > 0.0 ? gaussian_abs_moment(p, std::sqrt(sz2)) : 0.0;
    return compose::p_variation_score_from_mean(expected, y, grid, p, cell_weights);
}

double crps_spatial_mean_closed(const Eigen::VectorXd& mu, const Eigen::MatrixXd& cov,
                                const GridDomain& grid, int patch_size,
                                const Eigen::VectorXd& y) {
    if (patch_size < 1 || patch_size > std::min(grid.width, grid.height))
        throw std::invalid_argument("crps_spatial_mean_closed: patch size outside grid");
    if (mu.size() != grid.size() || y.size() != grid.size())
        throw std::invalid_argument("crps_spatial_mean_closed: dimension mismatch");
    const int s = patch_size;
    double total = 0.0;
    int n_patches = 0;
    std::vector<int> sites;
    sites.reserve(s * s);
    for (int r = 1; r + s - 1 <= grid.height; ++r) {
        for (int c = 1; c + s - 1 <= grid.width; ++c) {
            sites.clear();
            for (int dr = 0; dr < s; ++dr)
                for (int dc = 0; dc < s; ++dc) sites.push_back(grid.flat(r + dr, c + dc));
            double mu_p = 0.0, var_p = 0.0, y_p = 0.0;
            for (int i : sites) {
                mu_p += mu(i);
                y_p += y(i);
                for (int j : sites) var_p += cov(i, j);
            }
            const double n = static_cast<double>(sites.size());
            mu_p /= n;
            y_p /= n;
            var_p /= n * n;
            total += uni::crps_gaussian({mu_p, std::sqrt(var_p)}, y_p);
            ++n_patches;
        }
    }
    return total / n_patches;
}

double crps_spatial_mean_closed(const grf::PowerExpCovariance& cov, const GridDomain& grid,
                                int patch_size, const Eigen::VectorXd& y,
                                double mean_offset) {
    return crps_spatial_mean_closed(Eigen::VectorXd::Constant(grid.size(), mean_offset),
                                    grf::covariance_matrix(cov, grid), grid, patch_size, y);
}

} // namespace verif::oracle
