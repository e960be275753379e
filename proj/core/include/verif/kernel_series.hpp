// Kernel scoring rules and their series-of-squared-errors decompositions.
#pragma once

#include "verif/univariate.hpp"

#include <functional>
#include <string>
#include <vector>

namespace verif::ks {

struct Kernel {
    std::string name;  // "gaussian" or "crps"
    std::function<double(double, double)> evaluate;
};

Kernel gaussian_kernel();
Kernel crps_kernel();
Kernel kernel_by_name(const std::string& name);

// Identifies one basis function of a series decomposition.
struct BasisId {
    enum class Kind { Gaussian, Plateau, Triangle };
    Kind kind;
    int l = 0;  // polynomial degree (gaussian) or integer position (haar)
    int m = 0;  // scale (triangle only)
    std::string label() const;
};

struct TruncationSpec {
    int gaussian_max_terms = 30;  // series terms l = 0..L-1
    double haar_lo = 0.0;         // integer positions cover [haar_lo, haar_hi]
    double haar_hi = 0.0;
    int haar_max_scale = 12;

    // Positions spanning [min-1, max+1] of ensemble and observation.
    static TruncationSpec for_data(const uni::UnivariateEnsemble& f, double y,
                                   int gaussian_terms = 30, int max_scale = 12);
};

// Basis function value at x.
double basis_value(const BasisId& id, double x);

// Nonnegative squared-RKHS-distance form:
// 1/2 ( E rho(X,X') - 2 E rho(X,y) + rho(y,y) ).
double kernel_score(const Kernel& k, const uni::UnivariateEnsemble& f, double y);

struct SeriesTerm {
    BasisId id;
    double contribution;  // >= 0
};

std::vector<SeriesTerm> series_contributions(const Kernel& k,
                                             const uni::UnivariateEnsemble& f, double y,
                                             const TruncationSpec& trunc);

double series_score(const Kernel& k, const uni::UnivariateEnsemble& f, double y,
                    const TruncationSpec& trunc);

} // namespace verif::ks
