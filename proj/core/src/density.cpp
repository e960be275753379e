#include "verif/density.hpp"

#include "verif/quadrature.hpp"

#include <cmath>

namespace verif {

DensityForecast::DensityForecast(Family f, double mu, double scale, double df)
    : family_(f), mu_(mu), scale_(scale), df_(df) {
    switch (family_) {
        case Family::Gaussian:
            lo_ = mu_ - 10.0 * scale_;
            hi_ = mu_ + 10.0 * scale_;
            break;
        case Family::Uniform:
            lo_ = mu_;
            hi_ = mu_ + scale_;
            break;
        case Family::StudentLocationScale:
            lo_ = mu_ - 60.0 * scale_;
            hi_ = mu_ + 60.0 * scale_;
            break;
    }
    validate();
}

void DensityForecast::validate() const {
    if (scale_ <= 0.0) throw std::invalid_argument("DensityForecast: scale must be positive");
    if (family_ == Family::StudentLocationScale && df_ <= 2.0)
        throw std::invalid_argument("DensityForecast: Student df must exceed 2");
    // Mass check by quadrature, tolerance 1e-6.
    double mass = integrate([this](double x) { return pdf(x); }, lo_, hi_, 1e-10);
    if (std::abs(mass - 1.0) > 1e-6)
        throw std::logic_error("DensityForecast: density does not integrate to 1");
}

DensityForecast DensityForecast::gaussian(double mu, double sigma) {
    return DensityForecast(Family::Gaussian, mu, sigma, 0.0);
}

DensityForecast DensityForecast::uniform(double a, double b) {
    if (!(b > a)) throw std::invalid_argument("DensityForecast::uniform: b > a required");
    return DensityForecast(Family::Uniform, a, b - a, 0.0);
}

DensityForecast DensityForecast::student(double mu, double tau, double df) {
    return DensityForecast(Family::StudentLocationScale, mu, tau, df);
}

double DensityForecast::pdf(double y) const {
    switch (family_) {
        case Family::Gaussian: {
            double z = (y - mu_) / scale_;
            return norm_pdf(z) / scale_;
        }
        case Family::Uniform:
            return (y >= lo_ && y <= hi_) ? 1.0 / scale_ : 0.0;
        case Family::StudentLocationScale: {
            double z = (y - mu_) / scale_;
            double lognorm = std::lgamma(0.5 * (df_ + 1.0)) - std::lgamma(0.5 * df_) -
                             0.5 * std::log(df_ * M_PI) - std::log(scale_);
            return std::exp(lognorm - 0.5 * (df_ + 1.0) * std::log1p(z * z / df_));
        }
    }
    return 0.0;
}

double DensityForecast::dpdf(double y) const {
    switch (family_) {
        case Family::Gaussian: {
            double z = (y - mu_) / scale_;
            return -z / scale_ * pdf(y);
        }
        case Family::Uniform:
            return 0.0;
        case Family::StudentLocationScale: {
            double z = (y - mu_) / scale_;
            // d/dy log f = -(df+1) z / (df + z^2) / tau
            return pdf(y) * (-(df_ + 1.0) * z / (df_ + z * z) / scale_);
        }
    }
    return 0.0;
}

double DensityForecast::d2pdf(double y) const {
    switch (family_) {
        case Family::Gaussian: {
            double z = (y - mu_) / scale_;
            return (z * z - 1.0) / (scale_ * scale_) * pdf(y);
        }
        case Family::Uniform:
            return 0.0;
        case Family::StudentLocationScale: {
            double z = (y - mu_) / scale_;
            double u = df_ + z * z;
            double dlog = -(df_ + 1.0) * z / u / scale_;                  // (log f)'
            double d2log = -(df_ + 1.0) * (df_ - z * z) / (u * u) / (scale_ * scale_);  // (log f)''
            return pdf(y) * (d2log + dlog * dlog);
        }
    }
    return 0.0;
}

double DensityForecast::norm(double alpha) const {
    if (alpha <= 1.0) throw std::invalid_argument("DensityForecast::norm: alpha > 1 required");
    switch (family_) {
        case Family::Gaussian: {
            // ||f||_alpha = (2 pi sigma^2)^{(1-alpha)/(2 alpha)} alpha^{-1/(2 alpha)}
            double sigma2 = scale_ * scale_;
            double log_int = (1.0 - alpha) * 0.5 * std::log(2.0 * M_PI * sigma2) - 0.5 * std::log(alpha);
            return std::exp(log_int / alpha);
        }
        case Family::Uniform:
            return std::pow(scale_, (1.0 - alpha) / alpha);
        case Family::StudentLocationScale: {
            double v = integrate([this, alpha](double x) { return std::pow(pdf(x), alpha); },
                                 lo_, hi_, 1e-12);
            return std::pow(v, 1.0 / alpha);
        }
    }
    return 0.0;
}

double DensityForecast::stddev() const {
    switch (family_) {
        case Family::Gaussian: return scale_;
        case Family::Uniform: return scale_ / std::sqrt(12.0);
        case Family::StudentLocationScale: return scale_ * std::sqrt(df_ / (df_ - 2.0));
    }
    return 0.0;
}

} // namespace verif
