// Score composition: lifting through transformations, weighted aggregation,
// and the named composite scores built from them.
#pragma once

#include "verif/grid.hpp"
#include "verif/transforms.hpp"

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace verif::compose {

// A scoring rule acting on an ensemble (rows = members) and an observation.
using EnsembleScorer =
    std::function<double(const Eigen::MatrixXd&, const Eigen::VectorXd&)>;

struct LiftedScore {
    EnsembleScorer base;       // acts on the transformed space
    tf::Transformation transform;

    double operator()(const Eigen::MatrixXd& members, const Eigen::VectorXd& y) const;
};

LiftedScore lift(EnsembleScorer base, tf::Transformation transform);

struct Aggregation {
    std::vector<std::pair<EnsembleScorer, double>> terms;  // (score, weight >= 0)
};

double aggregate(const Aggregation& agg, const Eigen::MatrixXd& members,
                 const Eigen::VectorXd& y);

// Average of ES_alpha over all s x s square patches (uniform weights).
double patched_energy_score(const Eigen::MatrixXd& members, const Eigen::VectorXd& y,
                            const GridDomain& grid, int patch_size, double alpha = 1.0);

// Sum over interior cells of squared errors of the p-variation transform.
// Empty weights means uniform 1/|D*|.
double p_variation_score(const Eigen::MatrixXd& members, const Eigen::VectorXd& y,
                         const GridDomain& grid, double p,
                         const std::vector<double>& cell_weights = {});

// Same, with the forecast's expected transform supplied (stationary fields
// have one value for every cell), bypassing the ensemble.
double p_variation_score_from_mean(double expected_transform, const Eigen::VectorXd& y,
                                   const GridDomain& grid, double p,
                                   const std::vector<double>& cell_weights = {});

// Sum over scales h of squared errors of the isotropy statistic.
// Empty weights means w_h = 1/h.
double anisotropic_score(const Eigen::MatrixXd& members, const Eigen::VectorXd& y,
                         const GridDomain& grid, const std::vector<int>& scales,
                         tf::IsotropyAxes axes = tf::IsotropyAxes::Diagonal,
                         const std::vector<double>& scale_weights = {});

// Average over s x s patches of the kernel CRPS of the ensemble of patch means.
double crps_spatial_mean(const Eigen::MatrixXd& members, const Eigen::VectorXd& y,
                         const GridDomain& grid, int patch_size);

// Average over s x s patches of the squared error of the fraction of
// threshold exceedance.
double se_fte(const Eigen::MatrixXd& members, const Eigen::VectorXd& y,
              const GridDomain& grid, int patch_size, double threshold);

// Threshold weighting is exactly lifting through a chaining function.
LiftedScore threshold_weighted(EnsembleScorer base, tf::Transformation chain);

} // namespace verif::compose
