#include "verif/univariate.hpp"

#include "verif/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace verif::uni {

UnivariateEnsemble::UnivariateEnsemble(std::vector<double> samples)
    : samples_(std::move(samples)), sorted_(samples_) {
    if (samples_.empty()) throw std::invalid_argument("UnivariateEnsemble: M >= 1 required");
    for (double v : samples_)
        if (!std::isfinite(v)) throw std::invalid_argument("UnivariateEnsemble: non-finite sample");
    std::sort(sorted_.begin(), sorted_.end());
    mean_ = std::accumulate(samples_.begin(), samples_.end(), 0.0) / samples_.size();
}

double UnivariateEnsemble::variance() const {
    if (size() < 2) throw std::invalid_argument("UnivariateEnsemble::variance: M >= 2 required");
    double ss = 0.0;
    for (double v : samples_) ss += (v - mean_) * (v - mean_);
    return ss / (size() - 1);
}

double UnivariateEnsemble::skewness() const {
    double m2 = 0.0, m3 = 0.0;
    for (double v : samples_) {
        double d = v - mean_;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= size();
    m3 /= size();
    if (m2 == 0.0) return 0.0;
    return m3 / std::pow(m2, 1.5);
}

double UnivariateEnsemble::quantile(double alpha) const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("quantile: alpha outside (0,1)");
    int m = size();
    int k = static_cast<int>(std::ceil(alpha * m));  // lowest rank with rank/M >= alpha
    k = std::max(1, std::min(m, k));
    return sorted_[k - 1];
}

double UnivariateEnsemble::cdf(double t) const {
    auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
    return static_cast<double>(it - sorted_.begin()) / size();
}

double se(double mu_f, double y) {
    double d = mu_f - y;
    return d * d;
}

double ae(double median_f, double y) { return std::abs(median_f - y); }

double qs(double alpha, double q_alpha, double y) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("qs: alpha outside (0,1)");
    double ind = y <= q_alpha ? 1.0 : 0.0;
    return (ind - alpha) * (q_alpha - y);
}

double bs(double t, double p_cdf_at_t, double y) {
    if (p_cdf_at_t < 0.0 || p_cdf_at_t > 1.0)
        throw std::invalid_argument("bs: F(t) outside [0,1]");
    double ind = y <= t ? 1.0 : 0.0;
    double d = p_cdf_at_t - ind;
    return d * d;
}

namespace {

// Sum over ordered pairs of |x_i - x_j| in O(M log M) given sorted input:
// sum_{i<j} (x_(j) - x_(i)) = sum_k (2k + 1 - M) x_(k), 0-based ranks.
double pair_abs_sum(const std::vector<double>& sorted) {
    const int m = static_cast<int>(sorted.size());
    double s = 0.0;
    for (int k = 0; k < m; ++k) s += (2.0 * k + 1.0 - m) * sorted[k];
    return s;  // equals sum_{i<j} |x_i - x_j|
}

} // namespace

double crps_ensemble(std::span<const double> samples, double y, CrpsEstimator estimator) {
    const int m = static_cast<int>(samples.size());
    if (m < 1) throw std::invalid_argument("crps_ensemble: M >= 1 required");
    if (estimator == CrpsEstimator::Fair && m < 2)
        throw std::invalid_argument("crps_ensemble: fair estimator requires M >= 2");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    double term1 = 0.0;
    for (double v : sorted) term1 += std::abs(v - y);
    term1 /= m;
    double pairs = pair_abs_sum(sorted);  // sum over i<j
    double term2;
    if (estimator == CrpsEstimator::Kernel) {
        term2 = pairs / (static_cast<double>(m) * m);  // (1/2M^2) * 2 * pairs
    } else {
        term2 = pairs / (static_cast<double>(m) * (m - 1));
    }
    return term1 - term2;
}

double crps_ensemble(const UnivariateEnsemble& f, double y, CrpsEstimator estimator) {
    return crps_ensemble(std::span<const double>(f.samples()), y, estimator);
}

double crps_gaussian(const GaussianMarginal& g, double y) {
    if (!(g.sigma > 0.0)) throw std::invalid_argument("crps_gaussian: sigma > 0 required");
    double z = (y - g.mu) / g.sigma;
    return g.sigma * (z * (2.0 * norm_cdf(z) - 1.0) + 2.0 * norm_pdf(z) - 1.0 / std::sqrt(M_PI));
}

double dss(double mu, double sigma2, double y) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("dss: variance > 0 required");
    double d = mu - y;
    return std::log(sigma2) + d * d / sigma2;
}

double dss(const GaussianMarginal& g, double y) { return dss(g.mu, g.sigma * g.sigma, y); }

double ess(const MomentSummary& m, double y) {
    double sigma = std::sqrt(m.variance);
    double err = m.mean - y;
    double v = m.variance - err * err - err * sigma * m.skewness;
    return v * v;
}

double logs(const DensityForecast& f, double y) {
    double fy = f.pdf(y);
    if (!(fy > 0.0)) throw std::domain_error("logs: f(y) = 0");
    return -std::log(fy);
}

double hyvarinen(const DensityForecast& f, double y, double scale_factor) {
    double fy = scale_factor * f.pdf(y);
    if (!(fy > 0.0)) throw std::domain_error("hyvarinen: f(y) = 0");
    double d1 = scale_factor * f.dpdf(y);
    double d2 = scale_factor * f.d2pdf(y);
    double r1 = d1 / fy;
    return 2.0 * d2 / fy - r1 * r1;
}

double quads(const DensityForecast& f, double y) {
    double n2 = f.norm(2.0);
    return n2 * n2 - 2.0 * f.pdf(y);
}

double pseudos(const DensityForecast& f, double y, double alpha) {
    if (!(alpha > 1.0)) throw std::invalid_argument("pseudos: alpha > 1 required");
    double fy = f.pdf(y);
    return -std::pow(fy, alpha - 1.0) / std::pow(f.norm(alpha), alpha - 1.0);
}

} // namespace verif::uni
