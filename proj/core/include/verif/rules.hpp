// Scoring-rule catalog: evaluates a named rule on an ensemble forecast.
#pragma once

#include "verif/grid.hpp"

#include <string>
#include <vector>

namespace verif::rules {

// Evaluates one rule on one forecast/observation pair. Univariate rules are
// aggregated over sites with uniform weights. Rules that need an analytic
// density (logs, hyvarinen, quads, pseudos) reject ensembles.
//
// Catalog:
//   se, ae, qs(alpha), bs(threshold), crps[estimator=kernel|fair], dss, ess
//   se_mv, dss_mv, es(alpha), vs(p[,weights=uniform|inverse_distance]),
//   patched_es(patch_size[,alpha]), pvs(p), as(max_scale[,axes=diagonal|grid]),
//   crps_mean(patch_size), se_fte(patch_size,threshold),
//   tw_crps(threshold[,chaining]), tw_es(threshold[,chaining]),
//   tw_vs(threshold,p[,chaining])   with chaining = threshold_clamp|indicator
double evaluate(const ScoringRuleSpec& rule, const GridDomain& grid,
                const EnsembleForecast& forecast, const Observation& obs);

// One score per observation (rows of obs). Errors gain the observation index.
ScoreSeries evaluate_series(const ScoringRuleSpec& rule, const GridDomain& grid,
                            const EnsembleForecast& forecast,
                            const Eigen::MatrixXd& observations);

// Grid inferred as the square root of the dimension; rules that do not use
// the geometry accept any d.
GridDomain infer_grid(const ScoringRuleSpec& rule, int dim);

} // namespace verif::rules
