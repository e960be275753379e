#pragma once

#include "verif/density.hpp"

#include <span>
#include <vector>

namespace verif::uni {

// Univariate ensemble with a sorted copy cached for quantile queries.
class UnivariateEnsemble {
public:
    explicit UnivariateEnsemble(std::vector<double> samples);

    const std::vector<double>& samples() const { return samples_; }
    const std::vector<double>& sorted() const { return sorted_; }
    int size() const { return static_cast<int>(samples_.size()); }

    double mean() const { return mean_; }
    double variance() const;  // unbiased, M >= 2
    double skewness() const;  // biased moment estimator
    // Left-continuous inverse empirical cdf: lowest member whose rank/M >= alpha.
    double quantile(double alpha) const;
    double median() const { return quantile(0.5); }
    // Empirical cdf F(t) = #(x <= t)/M.
    double cdf(double t) const;

private:
    std::vector<double> samples_;
    std::vector<double> sorted_;
    double mean_;
};

struct GaussianMarginal {
    double mu;
    double sigma;  // > 0
};

struct MomentSummary {
    double mean;
    double variance;  // >= 0
    double skewness;
};

enum class CrpsEstimator { Kernel, Fair };

double se(double mu_f, double y);
double ae(double median_f, double y);
double qs(double alpha, double q_alpha, double y);
double bs(double t, double p_cdf_at_t, double y);

double crps_ensemble(std::span<const double> samples, double y,
                     CrpsEstimator estimator = CrpsEstimator::Kernel);
double crps_ensemble(const UnivariateEnsemble& f, double y,
                     CrpsEstimator estimator = CrpsEstimator::Kernel);
double crps_gaussian(const GaussianMarginal& g, double y);

double dss(const GaussianMarginal& g, double y);
double dss(double mu, double sigma2, double y);
double ess(const MomentSummary& m, double y);

double logs(const DensityForecast& f, double y);
// Scale-invariant local score; accepts an optional scale factor c applied to
// the density (the value must not change, which the tests exercise).
double hyvarinen(const DensityForecast& f, double y, double scale_factor = 1.0);
double quads(const DensityForecast& f, double y);
double pseudos(const DensityForecast& f, double y, double alpha);

} // namespace verif::uni
