#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace verif {

// Analytic univariate density with the derivatives and L_alpha norms needed
// by the density-based scores. Kernel density estimation from ensembles is
// deliberately not offered.
class DensityForecast {
public:
    enum class Family { Gaussian, Uniform, StudentLocationScale };

    static DensityForecast gaussian(double mu, double sigma);
    static DensityForecast uniform(double a, double b);
    // Location-scale Student-t with location mu, scale tau, df degrees of freedom.
    static DensityForecast student(double mu, double tau, double df);

    Family family() const { return family_; }

    double pdf(double y) const;
    double dpdf(double y) const;   // f'
    double d2pdf(double y) const;  // f''

    // L_alpha norm of the density; closed form where available, quadrature otherwise.
    double norm(double alpha) const;

    // Support bounds used for quadrature (infinite families return wide bounds).
    double lo() const { return lo_; }
    double hi() const { return hi_; }

    double mean() const { return mu_; }
    double stddev() const;

private:
    DensityForecast(Family f, double mu, double scale, double df);
    void validate() const;

    Family family_;
    double mu_;     // location (Gaussian mean / uniform lower bound)
    double scale_;  // sigma / (b - a) / tau
    double df_;     // Student only
    double lo_, hi_;
};

} // namespace verif
