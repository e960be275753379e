#include "verif/compose.hpp"

#include "verif/multivariate.hpp"
#include "verif/univariate.hpp"

#include <cmath>
#include <stdexcept>

namespace verif::compose {

double LiftedScore::operator()(const Eigen::MatrixXd& members,
                               const Eigen::VectorXd& y) const {
    if (members.cols() != transform.input_dim || y.size() != transform.input_dim)
        throw std::invalid_argument("LiftedScore: dimension mismatch");
    return base(transform.push(members), transform(y));
}

LiftedScore lift(EnsembleScorer base, tf::Transformation transform) {
    return LiftedScore{std::move(base), std::move(transform)};
}

double aggregate(const Aggregation& agg, const Eigen::MatrixXd& members,
                 const Eigen::VectorXd& y) {
    if (agg.terms.empty()) throw std::invalid_argument("aggregate: no terms");
    double total = 0.0;
    for (std::size_t i = 0; i < agg.terms.size(); ++i) {
        const auto& [scorer, w] = agg.terms[i];
        if (w < 0.0) throw std::invalid_argument("aggregate: negative weight");
        if (w == 0.0) continue;
        try {
            total += w * scorer(members, y);
        } catch (const std::exception& e) {
            throw std::runtime_error("aggregate: term " + std::to_string(i) +
                                     " failed: " + e.what());
        }
    }
    return total;
}

namespace {

// Integral image over the grid: I(r,c) = sum of field over rows<=r, cols<=c
// (1-based grid coordinates, zero row/column of padding).
Eigen::MatrixXd integral_image(const Eigen::VectorXd& field, const GridDomain& grid) {
    Eigen::MatrixXd I = Eigen::MatrixXd::Zero(grid.height + 1, grid.width + 1);
    for (int r = 1; r <= grid.height; ++r)
        for (int c = 1; c <= grid.width; ++c)
            I(r, c) = field(grid.flat(r, c)) + I(r - 1, c) + I(r, c - 1) - I(r - 1, c - 1);
    return I;
}

inline double patch_sum(const Eigen::MatrixXd& I, int r0, int c0, int s) {
    return I(r0 + s - 1, c0 + s - 1) - I(r0 - 1, c0 + s - 1) - I(r0 + s - 1, c0 - 1) +
           I(r0 - 1, c0 - 1);
}

void check_patch_size(const GridDomain& grid, int s) {
    if (s < 1 || s > std::min(grid.width, grid.height))
        throw std::invalid_argument("patch size outside grid");
}

// Accumulates pow(per-patch sum of sq, alpha/2) over all s x s patches of a
// squared-difference field.
double patch_norm_sum(const Eigen::VectorXd& sq, const GridDomain& grid, int s,
                      double alpha) {
    Eigen::MatrixXd I = integral_image(sq, grid);
    double acc = 0.0;
    for (int r = 1; r + s - 1 <= grid.height; ++r) {
        for (int c = 1; c + s - 1 <= grid.width; ++c) {
            double v = patch_sum(I, r, c, s);
            if (v < 0.0) v = 0.0;  // rounding guard
            acc += alpha == 1.0 ? std::sqrt(v) : std::pow(v, 0.5 * alpha);
        }
    }
    return acc;
}

} // namespace

double patched_energy_score(const Eigen::MatrixXd& members, const Eigen::VectorXd& y,
                            const GridDomain& grid, int patch_size, double alpha) {
    check_patch_size(grid, patch_size);
    if (members.cols() != grid.size() || y.size() != grid.size())
        throw std::invalid_argument("patched_energy_score: dimension mismatch");
    if (!(alpha > 0.0) || !(alpha < 2.0))
        throw std::invalid_argument("patched_energy_score: alpha in (0,2) required");
    const int M = static_cast<int>(members.rows());
    const int n_r = grid.height - patch_size + 1;
    const int n_c = grid.width - patch_size + 1;
    const double n_patches = static_cast<double>(n_r) * n_c;

    double term1 = 0.0;
    Eigen::VectorXd sq(grid.size());
    for (int m = 0; m < M; ++m) {
        sq = (members.row(m).transpose() - y).array().square();
        term1 += patch_norm_sum(sq, grid, patch_size, alpha);
    }
    term1 /= M * n_patches;

    double term2 = 0.0;
    for (int m = 0; m < M; ++m) {
        for (int k = m + 1; k < M; ++k) {
            sq = (members.row(m) - members.row(k)).array().square();
            term2 += patch_norm_sum(sq, grid, patch_size, alpha);
        }
    }
    term2 /= static_cast<double>(M) * M * n_patches;
    return term1 - term2;
}

double p_variation_score(const Eigen::MatrixXd& members, const Eigen::VectorXd& y,
                         const GridDomain& grid, double p,
                         const std::vector<double>& cell_weights) {
    if (!(p > 0.0)) throw std::invalid_argument("p_variation_score: p > 0 required");
    if (members.cols() != grid.size() || y.size() != grid.size())
        throw std::invalid_argument("p_variation_score: dimension mismatch");
    const int n_r = grid.height - 1, n_c = grid.width - 1;
    const std::size_t n_cells = static_cast<std::size_t>(n_r) * n_c;
    if (!cell_weights.empty() && cell_weights.size() != n_cells)
        throw std::invalid_argument("p_variation_score: weight count mismatch");
    const int M = static_cast<int>(members.rows());
    double score = 0.0;
    std::size_t idx = 0;
    for (int r = 1; r <= n_r; ++r) {
        for (int c = 1; c <= n_c; ++c, ++idx) {
            int i00 = grid.flat(r, c), i10 = grid.flat(r + 1, c);
            int i01 = grid.flat(r, c + 1), i11 = grid.flat(r + 1, c + 1);
            double mean_t = 0.0;
            for (int m = 0; m < M; ++m)
                mean_t += mv::abs_pow(
                    members(m, i11) - members(m, i10) - members(m, i01) + members(m, i00), p);
            mean_t /= M;
            double obs_t = mv::abs_pow(y(i11) - y(i10) - y(i01) + y(i00), p);
            double w = cell_weights.empty() ? 1.0 / static_cast<double>(n_cells)
                                            : cell_weights[idx];
            score += w * (mean_t - obs_t) * (mean_t - obs_t);
        }
    }
    return score;
}

double p_variation_score_from_mean(double expected_transform, const Eigen::VectorXd& y,
                                   const GridDomain& grid, double p,
                                   const std::vector<double>& cell_weights) {
    const int n_r = grid.height - 1, n_c = grid.width - 1;
    const std::size_t n_cells = static_cast<std::size_t>(n_r) * n_c;
    if (!cell_weights.empty() && cell_weights.size() != n_cells)
        throw std::invalid_argument("p_variation_score_from_mean: weight count mismatch");
    double score = 0.0;
    std::size_t idx = 0;
    for (int r = 1; r <= n_r; ++r) {
        for (int c = 1; c <= n_c; ++c, ++idx) {
            double obs_t = mv::abs_pow(
                y(grid.flat(r + 1, c + 1)) - y(grid.flat(r + 1, c)) -
                    y(grid.flat(r, c + 1)) + y(grid.flat(r, c)), p);
            double w = cell_weights.empty() ? 1.0 / static_cast<double>(n_cells)
                                            : cell_weights[idx];
            score += w * (expected_transform - obs_t) * (expected_transform - obs_t);
        }
    }
    return score;
}

double anisotropic_score(const Eigen::MatrixXd& members, const Eigen::VectorXd& y,
                         const GridDomain& grid, const std::vector<int>& scales,
                         tf::IsotropyAxes axes, const std::vector<double>& scale_weights) {
    if (scales.empty()) throw std::invalid_argument("anisotropic_score: no scales");
    if (!scale_weights.empty() && scale_weights.size() != scales.size())
        throw std::invalid_argument("anisotropic_score: weight count mismatch");
    const int M = static_cast<int>(members.rows());
    double score = 0.0;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        auto t = tf::isotropy_statistic(grid, scales[i], axes);
        double mean_t = 0.0;
        for (int m = 0; m < M; ++m) mean_t += t(members.row(m).transpose())(0);
        mean_t /= M;
        double obs_t = t(y)(0);
        double w = scale_weights.empty() ? 1.0 / scales[i] : scale_weights[i];
        score += w * (mean_t - obs_t) * (mean_t - obs_t);
    }
    return score;
}

double crps_spatial_mean(const Eigen::MatrixXd& members, const Eigen::VectorXd& y,
                         const GridDomain& grid, int patch_size) {
    check_patch_size(grid, patch_size);
    if (members.cols() != grid.size() || y.size() != grid.size())
        throw std::invalid_argument("crps_spatial_mean: dimension mismatch");
    const int M = static_cast<int>(members.rows());
    const int s = patch_size;
    std::vector<Eigen::MatrixXd> imgs;
    imgs.reserve(M);
    for (int m = 0; m < M; ++m)
        imgs.push_back(integral_image(members.row(m).transpose(), grid));
    Eigen::MatrixXd obs_img = integral_image(y, grid);

    const double inv_cells = 1.0 / (static_cast<double>(s) * s);
    double total = 0.0;
    int n_patches = 0;
    std::vector<double> means(M);
    for (int r = 1; r + s - 1 <= grid.height; ++r) {
        for (int c = 1; c + s - 1 <= grid.width; ++c) {
            for (int m = 0; m < M; ++m) means[m] = patch_sum(imgs[m], r, c, s) * inv_cells;
            double obs_mean = patch_sum(obs_img, r, c, s) * inv_cells;
            total += uni::crps_ensemble(means, obs_mean, uni::CrpsEstimator::Kernel);
            ++n_patches;
        }
    }
    return total / n_patches;
}

double se_fte(const Eigen::MatrixXd& members, const Eigen::VectorXd& y,
              const GridDomain& grid, int patch_size, double threshold) {
    check_patch_size(grid, patch_size);
    if (members.cols() != grid.size() || y.size() != grid.size())
        throw std::invalid_argument("se_fte: dimension mismatch");
    const int M = static_cast<int>(members.rows());
    const int s = patch_size;
    // Per-site exceedance count over members, then one integral image.
    Eigen::VectorXd count = Eigen::VectorXd::Zero(grid.size());
    for (int m = 0; m < M; ++m)
        for (int i = 0; i < grid.size(); ++i)
            if (members(m, i) >= threshold) count(i) += 1.0;
    Eigen::VectorXd obs_ind(grid.size());
    for (int i = 0; i < grid.size(); ++i) obs_ind(i) = y(i) >= threshold ? 1.0 : 0.0;
    Eigen::MatrixXd cnt_img = integral_image(count, grid);
    Eigen::MatrixXd obs_img = integral_image(obs_ind, grid);

    const double inv_cells = 1.0 / (static_cast<double>(s) * s);
    double total = 0.0;
    int n_patches = 0;
    for (int r = 1; r + s - 1 <= grid.height; ++r) {
        for (int c = 1; c + s - 1 <= grid.width; ++c) {
            double mean_fte = patch_sum(cnt_img, r, c, s) * inv_cells / M;
            double obs_fte = patch_sum(obs_img, r, c, s) * inv_cells;
            total += (mean_fte - obs_fte) * (mean_fte - obs_fte);
            ++n_patches;
        }
    }
    return total / n_patches;
}

LiftedScore threshold_weighted(EnsembleScorer base, tf::Transformation chain) {
    if (chain.input_dim != chain.output_dim)
        throw std::invalid_argument("threshold_weighted: chaining must be pointwise");
    return lift(std::move(base), std::move(chain));
}

} // namespace verif::compose
