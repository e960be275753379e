#pragma once

#include <cmath>
#include <functional>

namespace verif {

// Adaptive Gauss-Kronrod (G7,K15) integration on [a,b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, int max_depth = 40);

// Standard normal pdf/cdf helpers used throughout the score catalog.
inline double norm_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

inline double norm_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// Inverse standard normal cdf (Acklam's rational approximation polished by
// one Halley step; absolute error well below 1e-12).
double norm_quantile(double p);

} // namespace verif
