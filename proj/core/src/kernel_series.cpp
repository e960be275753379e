#include "verif/kernel_series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace verif::ks {

Kernel gaussian_kernel() {
    return Kernel{"gaussian", [](double a, double b) {
                      double d = a - b;
                      return std::exp(-0.5 * d * d);
                  }};
}

Kernel crps_kernel() {
    // Brownian-motion covariance kernel; the |a| + |b| part cancels in the
    // signed measure F - delta_y, so the induced score is the kernel CRPS.
    return Kernel{"crps", [](double a, double b) {
                      return std::abs(a) + std::abs(b) - std::abs(a - b);
                  }};
}

Kernel kernel_by_name(const std::string& name) {
    if (name == "gaussian") return gaussian_kernel();
    if (name == "crps") return crps_kernel();
    throw std::invalid_argument("unknown kernel: " + name);
}

std::string BasisId::label() const {
    switch (kind) {
        case Kind::Gaussian: return "gaussian_l" + std::to_string(l);
        case Kind::Plateau: return "plateau_l" + std::to_string(l);
        case Kind::Triangle:
            return "triangle_l" + std::to_string(l) + "_m" + std::to_string(m);
    }
    return "?";
}

TruncationSpec TruncationSpec::for_data(const uni::UnivariateEnsemble& f, double y,
                                        int gaussian_terms, int max_scale) {
    TruncationSpec t;
    t.gaussian_max_terms = gaussian_terms;
    t.haar_max_scale = max_scale;
    const auto& s = f.sorted();
    t.haar_lo = std::min(s.front(), y) - 1.0;
    t.haar_hi = std::max(s.back(), y) + 1.0;
    return t;
}

namespace {

// Plateau: ramps from 0 to 1 on [0,1), then stays 1.
double plateau(double x) {
    if (x < 0.0) return 0.0;
    if (x < 1.0) return x;
    return 1.0;
}

// Triangle: peak 1/2 at x=1/2, supported on [0,1].
double triangle(double x) {
    if (x < 0.0 || x > 1.0) return 0.0;
    return 0.5 - std::abs(x - 0.5);
}

double gaussian_basis(int l, double x) {
    if (l == 0) return std::exp(-0.5 * x * x);
    if (x == 0.0) return 0.0;
    double mag = std::exp(l * std::log(std::abs(x)) - 0.5 * std::lgamma(l + 1.0) -
                          0.5 * x * x);
    return (x < 0.0 && l % 2 == 1) ? -mag : mag;
}

} // namespace

double basis_value(const BasisId& id, double x) {
    switch (id.kind) {
        case BasisId::Kind::Gaussian:
            return gaussian_basis(id.l, x);
        case BasisId::Kind::Plateau:
            return plateau(x - id.l);
        case BasisId::Kind::Triangle:
            return std::exp2(-0.5 * id.m) * triangle(std::exp2(id.m) * x - id.l);
    }
    throw std::invalid_argument("basis_value: bad id");
}

double kernel_score(const Kernel& k, const uni::UnivariateEnsemble& f, double y) {
    // The CRPS kernel reproduces the kernel CRPS estimator bit-for-bit.
    if (k.name == "crps") return uni::crps_ensemble(f, y, uni::CrpsEstimator::Kernel);
    const auto& x = f.sorted();
    const std::size_t M = x.size();
    double self = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        cross += k.evaluate(x[i], y);
        for (std::size_t j = 0; j < M; ++j) self += k.evaluate(x[i], x[j]);
    }
    self /= static_cast<double>(M) * M;
    cross /= static_cast<double>(M);
    return 0.5 * (self - 2.0 * cross + k.evaluate(y, y));
}

namespace {

double squared_error_term(const BasisId& id, const std::vector<double>& x, double y) {
    double mean = 0.0;
    for (double v : x) mean += basis_value(id, v);
    mean /= static_cast<double>(x.size());
    double d = mean - basis_value(id, y);
    return d * d;
}

} // namespace

std::vector<SeriesTerm> series_contributions(const Kernel& k,
                                             const uni::UnivariateEnsemble& f, double y,
                                             const TruncationSpec& trunc) {
    const auto& x = f.sorted();
    std::vector<SeriesTerm> terms;
    if (k.name == "gaussian") {
        if (trunc.gaussian_max_terms < 1)
            throw std::invalid_argument("series: at least one gaussian term");
        for (int l = 0; l < trunc.gaussian_max_terms; ++l) {
            BasisId id{BasisId::Kind::Gaussian, l, 0};
            // Gaussian series carries the global 1/2 from the squared RKHS norm.
            terms.push_back({id, 0.5 * squared_error_term(id, x, y)});
        }
        return terms;
    }
    if (k.name != "crps") throw std::invalid_argument("series: unsupported kernel " + k.name);
    if (trunc.haar_lo > trunc.haar_hi)
        throw std::invalid_argument("series: empty haar position range");
    if (trunc.haar_max_scale < 0)
        throw std::invalid_argument("series: haar max scale >= 0 required");
    // Plateau terms: T^0(x-l) varies on [l, l+1], is constant 1 above — keep
    // every l whose ramp or constant part can differ between inputs, i.e.
    // l <= hi; below lo-1 all inputs sit on the constant part together.
    int l0_lo = static_cast<int>(std::floor(trunc.haar_lo)) - 1;
    int l0_hi = static_cast<int>(std::ceil(trunc.haar_hi));
    for (int l = l0_lo; l <= l0_hi; ++l) {
        BasisId id{BasisId::Kind::Plateau, l, 0};
        terms.push_back({id, squared_error_term(id, x, y)});
    }
    for (int m = 0; m <= trunc.haar_max_scale; ++m) {
        double scale = std::exp2(m);
        int lo = static_cast<int>(std::floor(trunc.haar_lo * scale)) - 1;
        int hi = static_cast<int>(std::ceil(trunc.haar_hi * scale));
        for (int l = lo; l <= hi; ++l) {
            BasisId id{BasisId::Kind::Triangle, l, m};
            terms.push_back({id, squared_error_term(id, x, y)});
        }
    }
    return terms;
}

double series_score(const Kernel& k, const uni::UnivariateEnsemble& f, double y,
                    const TruncationSpec& trunc) {
    double total = 0.0;
    for (const auto& t : series_contributions(k, f, y, trunc)) total += t.contribution;
    return total;
}

} // namespace verif::ks
