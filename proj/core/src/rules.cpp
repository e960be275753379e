#include "verif/rules.hpp"

#include "verif/compose.hpp"
#include "verif/multivariate.hpp"
#include "verif/transforms.hpp"
#include "verif/univariate.hpp"

#include <cmath>
#include <stdexcept>

namespace verif::rules {

namespace {

uni::CrpsEstimator crps_estimator(const ScoringRuleSpec& rule) {
    std::string est = rule.option("estimator", "kernel");
    if (est == "kernel") return uni::CrpsEstimator::Kernel;
    if (est == "fair") return uni::CrpsEstimator::Fair;
    throw std::invalid_argument("rule 'crps': unknown estimator '" + est + "'");
}

// Mean over sites of a univariate score applied to the per-site member values.
template <typename Fn>
double aggregate_sites(const EnsembleForecast& f, const Observation& y, Fn&& site_score) {
    const int d = f.dim();
    double total = 0.0;
    std::vector<double> column(f.size());
    for (int i = 0; i < d; ++i) {
        for (int m = 0; m < f.size(); ++m) column[m] = f.members(m, i);
        total += site_score(column, y(i));
    }
    return total / d;
}

double ensemble_bs(const std::vector<double>& col, double y, double t) {
    // Exceedance convention, matching the fraction-of-threshold-exceedance
    // transform so the patch-size-1 identity with se_fte is exact.
    double p = 0.0;
    for (double v : col)
        if (v >= t) p += 1.0;
    p /= static_cast<double>(col.size());
    double ind = y >= t ? 1.0 : 0.0;
    return (p - ind) * (p - ind);
}

mv::PairWeights vs_weights(const ScoringRuleSpec& rule, const GridDomain& grid) {
    std::string scheme = rule.option("weights", "uniform");
    if (scheme == "uniform") return mv::PairWeights::uniform(grid.size());
    if (scheme == "inverse_distance") return mv::PairWeights::inverse_distance(grid);
    throw std::invalid_argument("rule '" + rule.name + "': unknown weights '" + scheme + "'");
}

tf::Transformation chaining_of(const ScoringRuleSpec& rule, int d) {
    double t = rule.required("threshold");
    std::string kind = rule.option("chaining", "threshold_clamp");
    if (kind == "threshold_clamp") return tf::chaining(tf::ChainingKind::ThresholdClamp, d, t);
    if (kind == "indicator") return tf::chaining(tf::ChainingKind::Indicator, d, t);
    throw std::invalid_argument("rule '" + rule.name + "': unknown chaining '" + kind + "'");
}

tf::IsotropyAxes axes_of(const ScoringRuleSpec& rule) {
    std::string axes = rule.option("axes", "diagonal");
    if (axes == "diagonal") return tf::IsotropyAxes::Diagonal;
    if (axes == "grid") return tf::IsotropyAxes::Grid;
    throw std::invalid_argument("rule '" + rule.name + "': unknown axes '" + axes + "'");
}

double check_unit_range(const ScoringRuleSpec& rule, const std::string& key) {
    double v = rule.required(key);
    if (!(v > 0.0) || !(v < 1.0))
        throw std::invalid_argument("rule '" + rule.name + "': " + key + " in (0,1) required");
    return v;
}

} // namespace

double evaluate(const ScoringRuleSpec& rule, const GridDomain& grid,
                const EnsembleForecast& f, const Observation& y) {
    f.validate();
    if (f.dim() != y.size())
        throw std::invalid_argument("rule '" + rule.name + "': forecast/observation dimension mismatch");
    const auto& name = rule.name;

    // Aggregated univariate rules.
    if (name == "se")
        return aggregate_sites(f, y, [](const std::vector<double>& col, double yi) {
            double mu = 0.0;
            for (double v : col) mu += v;
            return uni::se(mu / static_cast<double>(col.size()), yi);
        });
    if (name == "ae")
        return aggregate_sites(f, y, [](const std::vector<double>& col, double yi) {
            return uni::ae(uni::UnivariateEnsemble(col).median(), yi);
        });
    if (name == "qs") {
        double alpha = check_unit_range(rule, "alpha");
        return aggregate_sites(f, y, [alpha](const std::vector<double>& col, double yi) {
            return uni::qs(alpha, uni::UnivariateEnsemble(col).quantile(alpha), yi);
        });
    }
    if (name == "bs") {
        double t = rule.required("threshold");
        return aggregate_sites(f, y, [t](const std::vector<double>& col, double yi) {
            return ensemble_bs(col, yi, t);
        });
    }
    if (name == "crps") {
        auto est = crps_estimator(rule);
        if (est == uni::CrpsEstimator::Fair && f.size() < 2)
            throw std::invalid_argument("rule 'crps': fair estimator needs M >= 2");
        return aggregate_sites(f, y, [est](const std::vector<double>& col, double yi) {
            return uni::crps_ensemble(col, yi, est);
        });
    }
    if (name == "dss") {
        if (f.size() < 2) throw std::invalid_argument("rule 'dss': M >= 2 required");
        return aggregate_sites(f, y, [](const std::vector<double>& col, double yi) {
            uni::UnivariateEnsemble e(col);
            double v = e.variance();
            if (v <= 0.0) throw std::invalid_argument("rule 'dss': degenerate ensemble variance");
            return uni::dss(e.mean(), v, yi);
        });
    }
    if (name == "ess") {
        if (f.size() < 2) throw std::invalid_argument("rule 'ess': M >= 2 required");
        return aggregate_sites(f, y, [](const std::vector<double>& col, double yi) {
            uni::UnivariateEnsemble e(col);
            return uni::ess({e.mean(), e.variance(), e.skewness()}, yi);
        });
    }
    if (name == "logs" || name == "hyvarinen" || name == "quads" || name == "pseudos")
        throw std::invalid_argument("rule '" + name +
                                    "' needs an analytic density forecast, not an ensemble");

    // Multivariate rules.
    if (name == "se_mv") {
        Eigen::VectorXd mu = f.members.colwise().mean();
        return mv::se_mv(mu, y);
    }
    if (name == "dss_mv") {
        if (f.size() <= f.dim())
            throw std::invalid_argument("rule 'dss_mv': M > d required for a full-rank sample covariance");
        Eigen::VectorXd mu = f.members.colwise().mean();
        Eigen::MatrixXd centered = f.members.rowwise() - mu.transpose();
        mv::GaussianVectorForecast g{mu, centered.transpose() * centered / (f.size() - 1.0)};
        return mv::dss_mv(g, y);
    }
    if (name == "es") return mv::energy_score(f, y, rule.param("alpha", 1.0));
    if (name == "vs")
        return mv::variogram_score(f, y, rule.required("p"), vs_weights(rule, grid));

    // Composites.
    if (name == "patched_es")
        return compose::patched_energy_score(f.members, y, grid,
                                             static_cast<int>(rule.required("patch_size")),
                                             rule.param("alpha", 1.0));
    if (name == "pvs")
        return compose::p_variation_score(f.members, y, grid, rule.required("p"));
    if (name == "as") {
        int max_scale = static_cast<int>(rule.param("max_scale", 5));
        if (max_scale < 1)
            throw std::invalid_argument("rule 'as': max_scale >= 1 required");
        std::vector<int> scales;
        for (int h = 1; h <= max_scale; ++h) scales.push_back(h);
        return compose::anisotropic_score(f.members, y, grid, scales, axes_of(rule));
    }
    if (name == "crps_mean")
        return compose::crps_spatial_mean(f.members, y, grid,
                                          static_cast<int>(rule.required("patch_size")));
    if (name == "se_fte")
        return compose::se_fte(f.members, y, grid,
                               static_cast<int>(rule.required("patch_size")),
                               rule.required("threshold"));

    // Threshold-weighted kernel scores via chaining.
    if (name == "tw_crps") {
        auto chain = chaining_of(rule, f.dim());
        ScoringRuleSpec base{"crps", {}, rule.options};
        base.options.erase("chaining");
        GridDomain g = grid;
        return evaluate(base, g, EnsembleForecast{chain.push(f.members)}, chain(y));
    }
    if (name == "tw_es") {
        auto chain = chaining_of(rule, f.dim());
        return mv::energy_score(EnsembleForecast{chain.push(f.members)}, chain(y),
                                rule.param("alpha", 1.0));
    }
    if (name == "tw_vs") {
        auto chain = chaining_of(rule, f.dim());
        return mv::variogram_score(EnsembleForecast{chain.push(f.members)}, chain(y),
                                   rule.required("p"), vs_weights(rule, grid));
    }
    throw std::invalid_argument("unknown scoring rule '" + name + "'");
}

ScoreSeries evaluate_series(const ScoringRuleSpec& rule, const GridDomain& grid,
                            const EnsembleForecast& forecast,
                            const Eigen::MatrixXd& observations) {
    if (observations.rows() < 1)
        throw std::invalid_argument("evaluate_series: at least one observation");
    ScoreSeries series;
    series.score_name = rule.name;
    series.values.reserve(observations.rows());
    for (int i = 0; i < observations.rows(); ++i) {
        try {
            series.values.push_back(evaluate(rule, grid, forecast, observations.row(i)));
        } catch (const std::exception& e) {
            throw std::runtime_error("observation " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return series;
}

GridDomain infer_grid(const ScoringRuleSpec& rule, int dim) {
    if (rule.params.count("grid_width") && rule.params.count("grid_height")) {
        GridDomain g(static_cast<int>(rule.required("grid_width")),
                     static_cast<int>(rule.required("grid_height")));
        if (g.size() != dim)
            throw std::invalid_argument("rule grid dimensions do not match the data");
        return g;
    }
    int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim))));
    if (side * side == dim) return GridDomain(side, side);
    // Non-square data still works for rules that ignore the geometry.
    return GridDomain(dim, 1);
}

} // namespace verif::rules
